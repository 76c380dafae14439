#include "fxcredit/model/adjustment.hpp"

#include "fxcredit/errors.hpp"
#include "fxcredit/numerics/normal.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fxcredit {

double default_threshold(Probability p) {
    return std_normal_quantile(p);
}

double threshold_from_process(const AssetProcess& asset, const DebtSpec& debt) {
    const double sigma = asset.sigma();
    return (std::log(debt.debt()) - std::log(asset.a0()) - std::log(debt.f0()) - asset.mu() + 0.5 * sigma * sigma) /
           sigma;
}

double latent_variance(double vol_ratio, Correlation r) {
    const double v = vol_ratio * vol_ratio + 1.0 + 2.0 * r.value() * vol_ratio;
    if (!(v > 0.0)) {
        std::ostringstream msg;
        msg << "latent variance t^2 + 1 + 2 r t = " << v << " is not positive (t = " << vol_ratio
            << ", r = " << r.value() << ")";
        throw ModelValidityError(msg.str());
    }
    return v;
}

Correlation latent_correlation(Correlation rho, Correlation r1, double t1, Correlation r2, double t2) {
    // cov(t1 F + A1, t2 F + A2) with corr(F, A_i) = r_i: each t pairs with the other borrower's r
    const double num = rho.value() + r2.value() * t1 + r1.value() * t2 + t1 * t2;
    const double den = std::sqrt(latent_variance(t1, r1)) * std::sqrt(latent_variance(t2, r2));
    return Correlation(std::clamp(num / den, -1.0, 1.0));
}

Probability adjusted_pd(const BorrowerParams& b, const FxParams& fx) {
    if (fx.tau() == 0.0 && fx.nu() == 0.0)
        return b.pd();
    const double t = fx.tau() / b.sigma();
    const double c = default_threshold(b.pd());
    return Probability(std_normal_cdf((c - fx.nu() / b.sigma()) / std::sqrt(latent_variance(t, b.r()))));
}

Correlation adjusted_correlation(const PairParams& pair) {
    const double tau = pair.fx().tau();
    if (tau == 0.0)
        return pair.rho();
    return latent_correlation(pair.rho(), pair.b1().r(), tau / pair.b1().sigma(), pair.b2().r(),
                              tau / pair.b2().sigma());
}

AdjustedPair adjust_pair(const PairParams& pair) {
    return {adjusted_pd(pair.b1(), pair.fx()), adjusted_pd(pair.b2(), pair.fx()), adjusted_correlation(pair)};
}

double fx_drift_for_unit_mean(double tau) {
    if (!(std::isfinite(tau) && tau >= 0.0)) {
        std::ostringstream msg;
        msg << "fx volatility must be finite and >= 0, got " << tau;
        throw DomainError(msg.str());
    }
    return -0.5 * tau * tau;
}

double joint_default_probability(const AdjustedPair& adj) {
    return bivariate_normal_cdf(std_normal_quantile(adj.pd1_star), std_normal_quantile(adj.pd2_star),
                                adj.rho_star);
}

} // namespace fxcredit
