#pragma once

#include <compare>
#include <optional>
#include <string>

namespace fxcredit {

/// A probability strictly inside (0, 1).
class Probability {
public:
    explicit Probability(double value);

    double value() const noexcept { return value_; }

    auto operator<=>(const Probability&) const = default;

private:
    double value_;
};

/// A correlation coefficient in [-1, 1].
class Correlation {
public:
    explicit Correlation(double value);

    double value() const noexcept { return value_; }

    auto operator<=>(const Correlation&) const = default;

private:
    double value_;
};

/// Correlation matrix of (Z, A1, A2): Z the standardized FX shock, A1 and A2
/// the standardized asset shocks of two borrowers.
///
///     | 1   r1  r2  |
///     | r1  1   rho |
///     | r2  rho 1   |
struct CorrMatrix3 {
    Correlation r1{0.0};
    Correlation r2{0.0};
    Correlation rho{0.0};

    double at(int i, int j) const;

    double determinant() const;

    /// Description of the first failing PSD condition, or nullopt if the
    /// matrix is positive semidefinite up to psd_tolerance.
    std::optional<std::string> psd_violation() const;

    bool is_psd() const { return !psd_violation().has_value(); }
};

inline constexpr double psd_tolerance = 1e-12;

} // namespace fxcredit
