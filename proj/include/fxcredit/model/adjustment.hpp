#pragma once

#include "fxcredit/model/params.hpp"

namespace fxcredit {

/// Default threshold c = Phi^-1(p): the borrower defaults when its
/// standardized asset shock falls below c.
double default_threshold(Probability p);

/// c = (log D - log A0 - log F0 - mu + sigma^2/2) / sigma, the threshold
/// implied by a Merton asset process and foreign-currency debt.
double threshold_from_process(const AssetProcess& asset, const DebtSpec& debt);

/// Variance of the latent score F/sigma + A in units of the asset variance:
/// t^2 + 1 + 2 r t with t = tau/sigma. Throws ModelValidityError if <= 0,
/// which happens only for r = -1 and t = 1.
double latent_variance(double vol_ratio, Correlation r);

/// Correlation of the latent scores t1 Z + A1 and t2 Z + A2, where Z is the
/// standardized FX shock.
Correlation latent_correlation(Correlation rho, Correlation r1, double t1, Correlation r2, double t2);

/// PD with exchange-rate risk:
///   p* = Phi((c - nu/sigma) / sqrt(t^2 + 1 + 2 r t)),  t = tau/sigma.
Probability adjusted_pd(const BorrowerParams& b, const FxParams& fx);

/// Asset correlation with exchange-rate risk:
///   rho* = (rho + r1 t1 + r2 t2 + t1 t2) / sqrt((t1^2+1+2 r1 t1)(t2^2+1+2 r2 t2)).
/// Independent of nu.
Correlation adjusted_correlation(const PairParams& pair);

AdjustedPair adjust_pair(const PairParams& pair);

/// Mean of the log FX ratio that makes E[F(1)/F(0)] = 1, namely -tau^2/2.
double fx_drift_for_unit_mean(double tau);

/// Phi2(Phi^-1(p1*), Phi^-1(p2*); rho*). Returned as a plain double since
/// it is exactly 0 for rho* = -1 and p1* + p2* <= 1.
double joint_default_probability(const AdjustedPair& adj);

} // namespace fxcredit
