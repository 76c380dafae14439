#pragma once

#include "fxcredit/numerics/types.hpp"

namespace fxcredit {

double std_normal_pdf(double x);

/// Standard normal CDF via erfc; full relative accuracy in the lower tail.
/// Throws DomainError for non-finite x.
double std_normal_cdf(double x);

/// Inverse standard normal CDF.
///
/// Acklam's rational approximation (relative error ~1.15e-9) polished with
/// two Halley steps against std_normal_cdf, which brings |Phi(x) - p| to
/// rounding level. The computation runs in the lower tail and reflects, so
/// q(1 - p) == -q(p) whenever 1 - p is exact.
double std_normal_quantile(Probability p);

/// Checked overload: throws DomainError unless 0 < p < 1.
double std_normal_quantile(double p);

/// P[X <= x, Y <= y] for a standard bivariate normal with correlation rho.
///
/// Genz's variant of the Drezner-Wesolowsky method: Gauss-Legendre
/// quadrature (6, 12 or 20 nodes by |rho|) of the Plackett identity over
/// asin(rho) for |rho| < 0.925, and an asymptotic expansion plus quadrature
/// around the singular point otherwise. Exact limits at |rho| = 1.
double bivariate_normal_cdf(double x, double y, Correlation rho);

} // namespace fxcredit
