#include "fxcredit/model/consistency.hpp"

#include "fxcredit/errors.hpp"
#include "fxcredit/model/adjustment.hpp"
#include "fxcredit/numerics/normal.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fxcredit {

namespace {

// Squared threshold ratios below 1 by no more than this are rounding noise
// of Phi^-1(Phi(x)) and are treated as "no adjustment".
constexpr double kRatioSlack = 1e-12;

void require_below_half(Probability p, const char* name) {
    if (p.value() == 0.5) {
        std::ostringstream msg;
        msg << name << " = 0.5 gives a degenerate threshold Phi^-1(p) = 0";
        throw DomainError(msg.str());
    }
    if (p.value() > 0.5) {
        std::ostringstream msg;
        msg << name << " must lie in (0, 0.5), got " << p.value();
        throw DomainError(msg.str());
    }
}

// k^2 = c^2 / q*^2 for one borrower, validated to be >= 1.
double squared_threshold_ratio(Probability p, Probability p_star, int index) {
    const double c = default_threshold(p);
    const double q = default_threshold(p_star);
    double k2 = (c / q) * (c / q);
    if (k2 < 1.0) {
        if (k2 < 1.0 - kRatioSlack) {
            std::ostringstream msg;
            msg.precision(12);
            msg << "adjusted pd" << index << "* = " << p_star.value() << " is below pd" << index << " = "
                << p.value() << "; impossible for a driftless exchange rate independent of the assets";
            throw DomainError(msg.str());
        }
        k2 = 1.0;
    }
    return k2;
}

} // namespace

ConsistencyCheck check_consistency(Probability p1, Probability p2, Probability p1_star, Probability p2_star,
                                   Correlation rho, Correlation rho_star) {
    require_below_half(p1, "pd1");
    require_below_half(p2, "pd2");
    require_below_half(p1_star, "pd1*");
    require_below_half(p2_star, "pd2*");

    const double k1sq = squared_threshold_ratio(p1, p1_star, 1);
    const double k2sq = squared_threshold_ratio(p2, p2_star, 2);
    const double k1k2 = std::sqrt(k1sq) * std::sqrt(k2sq);

    const double residual = rho_star.value() * k1k2 - rho.value() - std::sqrt(k1sq - 1.0) * std::sqrt(k2sq - 1.0);
    return {residual, residual / k1k2};
}

double consistency_residual(Probability p1, Probability p2, Probability p1_star, Probability p2_star,
                            Correlation rho, Correlation rho_star) {
    return check_consistency(p1, p2, p1_star, p2_star, rho, rho_star).residual;
}

double implied_vol_ratio(Probability p, Probability p_star, Correlation r) {
    require_below_half(p, "pd");
    require_below_half(p_star, "pd*");

    const double c = default_threshold(p);
    const double q = default_threshold(p_star);
    const double disc = r.value() * r.value() - 1.0 + (c / q) * (c / q);
    if (disc < 0.0) {
        std::ostringstream msg;
        msg.precision(12);
        msg << "no volatility ratio moves pd " << p.value() << " to " << p_star.value() << " with r = " << r.value()
            << " (discriminant " << disc << " < 0)";
        throw NoSolutionError(msg.str());
    }
    const double t = -r.value() + std::sqrt(disc);
    if (t < 0.0) {
        std::ostringstream msg;
        msg.precision(12);
        msg << "volatility ratio solving pd " << p.value() << " -> " << p_star.value() << " with r = " << r.value()
            << " is negative (" << t << ")";
        throw NoSolutionError(msg.str());
    }
    return t;
}

Correlation implied_adjusted_correlation(Probability p1, Probability p2, Probability p1_star,
                                         Probability p2_star, Correlation rho, Correlation r1, Correlation r2) {
    const CorrMatrix3 m{r1, r2, rho};
    if (auto violation = m.psd_violation())
        throw ModelValidityError("correlation matrix of (fx, asset1, asset2) is not PSD: " + *violation);
    const double t1 = implied_vol_ratio(p1, p1_star, r1);
    const double t2 = implied_vol_ratio(p2, p2_star, r2);
    return latent_correlation(rho, r1, t1, r2, t2);
}

Correlation homogeneous_adjusted_correlation(Probability p, Correlation rho, Probability p_star) {
    require_below_half(p, "pd");
    require_below_half(p_star, "pd*");
    if (!(rho.value() < 1.0))
        throw DomainError("asset correlation must be < 1 for the homogeneous relation");
    if (p_star < p) {
        std::ostringstream msg;
        msg.precision(12);
        msg << "adjusted pd* = " << p_star.value() << " is below pd = " << p.value();
        throw DomainError(msg.str());
    }
    const double c = default_threshold(p);
    const double q = default_threshold(p_star);
    const double ratio = (q / c) * (q / c);
    return Correlation(std::clamp(1.0 - (1.0 - rho.value()) * ratio, -1.0, 1.0));
}

Probability homogeneous_implied_pd(Probability p, Correlation rho, Correlation rho_star) {
    require_below_half(p, "pd");
    if (!(rho_star.value() < 1.0))
        throw DomainError("adjusted asset correlation must be < 1 for the homogeneous relation");
    if (rho_star < rho) {
        std::ostringstream msg;
        msg.precision(12);
        msg << "adjusted correlation rho* = " << rho_star.value() << " is below rho = " << rho.value();
        throw DomainError(msg.str());
    }
    const double c = default_threshold(p);
    return Probability(std_normal_cdf(-std::abs(c) * std::sqrt((1.0 - rho_star.value()) / (1.0 - rho.value()))));
}

} // namespace fxcredit
