#pragma once

#include "fxcredit/numerics/types.hpp"

#include <array>

namespace fxcredit {

/// Lower-triangular factor L of a 3x3 correlation matrix, L * L^T = m.
struct Cholesky3 {
    std::array<std::array<double, 3>, 3> l{};

    double operator()(int i, int j) const { return l[i][j]; }

    /// L * z
    std::array<double, 3> apply(const std::array<double, 3>& z) const {
        return {l[0][0] * z[0],
                l[1][0] * z[0] + l[1][1] * z[1],
                l[2][0] * z[0] + l[2][1] * z[1] + l[2][2] * z[2]};
    }
};

/// Throws ModelValidityError naming the failing minor if m is not PSD.
/// Singular (PSD but not PD) matrices get a factor with a zero pivot.
Cholesky3 cholesky3(const CorrMatrix3& m);

} // namespace fxcredit
