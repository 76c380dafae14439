#include "fxcredit/cli/commands.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return fxcredit::cli::run(argc, argv, std::cout, std::cerr);
}
