#include "fxcredit/numerics/types.hpp"

#include "fxcredit/errors.hpp"

#include <cmath>
#include <sstream>

namespace fxcredit {

Probability::Probability(double value) : value_(value) {
    if (!(value > 0.0 && value < 1.0)) {
        std::ostringstream msg;
        msg << "probability must lie in the open interval (0, 1), got " << value;
        throw DomainError(msg.str());
    }
}

Correlation::Correlation(double value) : value_(value) {
    if (!(value >= -1.0 && value <= 1.0)) {
        std::ostringstream msg;
        msg << "correlation must lie in [-1, 1], got " << value;
        throw DomainError(msg.str());
    }
}

double CorrMatrix3::at(int i, int j) const {
    if (i == j)
        return 1.0;
    const int lo = i < j ? i : j;
    const int hi = i < j ? j : i;
    if (lo == 0)
        return hi == 1 ? r1.value() : r2.value();
    return rho.value();
}

double CorrMatrix3::determinant() const {
    const double a = r1.value(), b = r2.value(), c = rho.value();
    return 1.0 - a * a - b * b - c * c + 2.0 * a * b * c;
}

std::optional<std::string> CorrMatrix3::psd_violation() const {
    // Principal 2x2 minors are 1 - x^2 >= 0 for any valid Correlation, so the
    // leading minor and the determinant decide.
    const double minor01 = 1.0 - r1.value() * r1.value();
    if (minor01 < -psd_tolerance) {
        std::ostringstream msg;
        msg << "leading 2x2 minor (fx, asset1) = " << minor01 << " < 0";
        return msg.str();
    }
    const double det = determinant();
    if (det < -psd_tolerance) {
        std::ostringstream msg;
        msg.precision(12);
        msg << "3x3 determinant 1 - r1^2 - r2^2 - rho^2 + 2 r1 r2 rho = " << det
            << " < 0 (r1=" << r1.value() << ", r2=" << r2.value() << ", rho=" << rho.value() << ")";
        return msg.str();
    }
    return std::nullopt;
}

} // namespace fxcredit
