#pragma once

#include "fxcredit/numerics/types.hpp"

namespace fxcredit {

// Relations between original and adjusted (PD, correlation) that hold for a
// driftless, asset-independent exchange rate (nu = 0, r = 0) and need no
// volatilities. All PDs here must lie in (0, 0.5): thresholds are negative.

struct ConsistencyCheck {
    /// LHS - RHS of  rho* k1 k2 = rho + sqrt(k1^2 - 1) sqrt(k2^2 - 1),
    /// k_i = Phi^-1(p_i) / Phi^-1(p_i*).
    double residual;
    /// residual / (k1 k2): the input rho* minus the rho* the relation implies.
    double rho_star_gap;
};

/// Throws DomainError when a PD is outside (0, 0.5) or an adjusted PD lies
/// below the original one.
ConsistencyCheck check_consistency(Probability p1, Probability p2, Probability p1_star, Probability p2_star,
                                   Correlation rho, Correlation rho_star);

double consistency_residual(Probability p1, Probability p2, Probability p1_star, Probability p2_star,
                            Correlation rho, Correlation rho_star);

/// The volatility ratio t = tau/sigma that moves p to p_star when nu = 0:
/// the larger root of  t^2 + 2 r t + 1 - c^2/q*^2 = 0,  t = -r + sqrt(r^2 - 1 + c^2/q*^2).
/// Throws NoSolutionError if that root is complex or negative.
double implied_vol_ratio(Probability p, Probability p_star, Correlation r);

/// rho* implied by observed PD adjustments for FX-asset correlations r1, r2
/// (nu = 0). Reduces to the r = 0 relation above.
Correlation implied_adjusted_correlation(Probability p1, Probability p2, Probability p1_star,
                                         Probability p2_star, Correlation rho, Correlation r1, Correlation r2);

/// Homogeneous pair (p1 = p2, p1* = p2*):  rho* = 1 - (1 - rho) Phi^-1(p*)^2 / Phi^-1(p)^2.
Correlation homogeneous_adjusted_correlation(Probability p, Correlation rho, Probability p_star);

/// Inverse of homogeneous_adjusted_correlation in p*:
///   p* = Phi(-|Phi^-1(p)| sqrt((1 - rho*) / (1 - rho))).
Probability homogeneous_implied_pd(Probability p, Correlation rho, Correlation rho_star);

} // namespace fxcredit
