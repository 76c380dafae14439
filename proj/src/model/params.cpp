#include "fxcredit/model/params.hpp"

#include "fxcredit/errors.hpp"

#include <cmath>
#include <sstream>
#include <string>

namespace fxcredit {

namespace {

void require_positive(double value, const char* name) {
    if (!(std::isfinite(value) && value > 0.0)) {
        std::ostringstream msg;
        msg << name << " must be finite and > 0, got " << value;
        throw DomainError(msg.str());
    }
}

void require_finite(double value, const char* name) {
    if (!std::isfinite(value)) {
        std::ostringstream msg;
        msg << name << " must be finite, got " << value;
        throw DomainError(msg.str());
    }
}

} // namespace

FxParams::FxParams(double nu, double tau) : nu_(nu), tau_(tau) {
    require_finite(nu, "fx drift nu");
    require_finite(tau, "fx volatility tau");
    if (tau < 0.0)
        throw DomainError("fx volatility tau must be >= 0, got " + std::to_string(tau));
}

BorrowerParams::BorrowerParams(Probability pd, double sigma, Correlation r) : pd_(pd), sigma_(sigma), r_(r) {
    require_positive(sigma, "asset volatility sigma");
}

PairParams::PairParams(BorrowerParams b1, BorrowerParams b2, Correlation rho, FxParams fx)
    : b1_(b1), b2_(b2), rho_(rho), fx_(fx) {
    if (auto violation = corr_matrix().psd_violation())
        throw ModelValidityError("correlation matrix of (fx, asset1, asset2) is not PSD: " + *violation);
}

AssetProcess::AssetProcess(double a0, double mu, double sigma) : a0_(a0), mu_(mu), sigma_(sigma) {
    require_positive(a0, "initial asset value A0");
    require_finite(mu, "asset drift mu");
    require_positive(sigma, "asset volatility sigma");
}

DebtSpec::DebtSpec(double debt, double f0) : debt_(debt), f0_(f0) {
    require_positive(debt, "debt D");
    require_positive(f0, "spot exchange rate F0");
}

} // namespace fxcredit
