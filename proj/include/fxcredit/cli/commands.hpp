#pragma once

#include "fxcredit/cli/portfolio_io.hpp"
#include "fxcredit/model/params.hpp"
#include "fxcredit/simulation/monte_carlo.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace fxcredit::cli {

/// Command-line FX settings; flags take precedence over the [fx] section.
struct FxOverrides {
    std::optional<double> nu;
    std::optional<double> tau;
    /// nu = -tau^2/2, i.e. E[F(1)/F(0)] = 1.
    bool unit_mean = false;
};

FxParams resolve_fx(const Portfolio& portfolio, const FxOverrides& overrides);

struct AdjustOptions {
    std::string portfolio;
    std::optional<std::string> output;
    FxOverrides fx;
};

struct CheckOptions {
    std::string input;
    std::optional<std::string> output;
    double tolerance = 1e-6;
};

struct CurveOptions {
    std::optional<std::string> spec_path;
    std::optional<double> p;
    std::optional<double> rho;
    std::vector<double> grid;
    unsigned long long points = 0;
    std::optional<std::string> output;
};

struct SimulateOptions {
    std::string portfolio;
    std::optional<std::string> output;
    FxOverrides fx;
    std::uint64_t n = 1'000'000;
    std::uint64_t seed = 1;
    SimMode mode = SimMode::reduced;
    int steps = 1;
    unsigned threads = 0;
};

// Each command writes CSV to options.output (or `out`), diagnostics to
// `err` as "<source>:<line>:<field>: error: <detail>", and returns an
// ExitCode value.
int cmd_adjust(const AdjustOptions& options, std::ostream& out, std::ostream& err);
int cmd_check(const CheckOptions& options, std::ostream& out, std::ostream& err);
int cmd_curve(const CurveOptions& options, std::ostream& out, std::ostream& err);
int cmd_simulate(const SimulateOptions& options, std::ostream& out, std::ostream& err);

/// Full command line: `fxcredit <adjust|check|curve|simulate> ...`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace fxcredit::cli
