#include "fxcredit/numerics/cholesky.hpp"

#include "fxcredit/errors.hpp"

#include <algorithm>
#include <cmath>

namespace fxcredit {

Cholesky3 cholesky3(const CorrMatrix3& m) {
    if (auto violation = m.psd_violation())
        throw ModelValidityError("correlation matrix of (fx, asset1, asset2) is not PSD: " + *violation);

    const double r1 = m.r1.value();
    const double r2 = m.r2.value();
    const double rho = m.rho.value();

    Cholesky3 f;
    f.l[0][0] = 1.0;
    f.l[1][0] = r1;
    f.l[1][1] = std::sqrt(std::max(0.0, 1.0 - r1 * r1));
    f.l[2][0] = r2;
    // zero pivot: PSD forces rho == r1 * r2 up to tolerance, so column 1 carries nothing
    f.l[2][1] = f.l[1][1] > 0.0 ? (rho - r1 * r2) / f.l[1][1] : 0.0;
    f.l[2][2] = std::sqrt(std::max(0.0, 1.0 - r2 * r2 - f.l[2][1] * f.l[2][1]));
    return f;
}

} // namespace fxcredit
