#pragma once

#include "fxcredit/model/params.hpp"

#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fxcredit::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_consistency_failure = 1,
    exit_validation = 2,
    exit_model_validity = 3,
    exit_domain = 4,
};

/// Input problem located at "<source>:<line>[:<field>]".
class InputError : public std::runtime_error {
public:
    InputError(ExitCode code, const std::string& where, const std::string& detail)
        : std::runtime_error(where + ": " + detail), code_(code), where_(where), detail_(detail) {}

    ExitCode code() const { return code_; }
    const std::string& where() const { return where_; }
    const std::string& detail() const { return detail_; }

private:
    ExitCode code_;
    std::string where_;
    std::string detail_;
};

std::string location(const std::string& source, int line, const std::string& field = {});

struct BorrowerRecord {
    std::string id;
    int line = 0;
    /// Given explicitly or derived from the process columns.
    Probability pd{0.5};
    double sigma = 1.0;
    Correlation r{0.0};
    /// Present when the a0, mu, debt, f0 columns are filled.
    std::optional<AssetProcess> asset;
    std::optional<DebtSpec> debt;

    BorrowerParams params() const { return {pd, sigma, r}; }
};

struct PairRecord {
    std::string id1;
    std::string id2;
    int line = 0;
    Correlation rho{0.0};
};

/// Sectioned text file:
///
///     # comment
///     [fx]
///     nu = 0
///     tau = 0.1
///     [borrowers]
///     id,pd,sigma,r[,a0,mu,debt,f0]
///     ...
///     [pairs]
///     id1,id2,rho
///     ...
///
/// The [fx] section is optional (flags may supply it). Borrowers need pd
/// or the four process columns; when both are given they must agree.
struct Portfolio {
    std::string source;
    std::optional<double> nu;
    std::optional<double> tau;
    std::vector<BorrowerRecord> borrowers;
    std::vector<PairRecord> pairs;

    const BorrowerRecord& borrower(const std::string& id) const;
};

/// Throws InputError (exit 2 for syntax and references, exit 3 for a
/// non-PSD pair).
Portfolio parse_portfolio(std::istream& in, const std::string& source);
Portfolio load_portfolio(const std::string& path);

/// One row of `adjust` output, the input of `check`.
struct AdjustedRow {
    int line = 0;
    std::string id1;
    std::string id2;
    double p1 = 0, p2 = 0, rho = 0, p1_star = 0, p2_star = 0, rho_star = 0;
};

std::vector<AdjustedRow> parse_adjusted(std::istream& in, const std::string& source);

struct CurveSpec {
    Probability p{0.5};
    Correlation rho{0.0};
    std::vector<double> grid;
};

/// key = value lines: p, rho, and either grid (comma list) or points (count
/// of a uniform grid strictly inside (p, 0.5)).
CurveSpec parse_curve_spec(std::istream& in, const std::string& source);

/// Throws InputError(exit 2) unless grid is strictly increasing inside (p, 0.5).
void validate_curve_grid(const CurveSpec& spec, const std::string& where);

std::vector<double> uniform_curve_grid(double p, unsigned long long points);

} // namespace fxcredit::cli
