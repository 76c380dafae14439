#pragma once

#include "fxcredit/numerics/types.hpp"

namespace fxcredit {

/// Log exchange-rate change over one year, F = log(F(1)/F(0)) ~ N(nu, tau^2).
///
/// Convention: F(t) is the number of debt-currency units per unit of the
/// borrower's asset currency, so the asset value in debt currency is F(t) A(t).
class FxParams {
public:
    FxParams(double nu, double tau);

    double nu() const { return nu_; }
    double tau() const { return tau_; }

private:
    double nu_;
    double tau_;
};

/// One borrower: one-currency PD, asset volatility, and correlation of the
/// asset shock with the FX shock.
class BorrowerParams {
public:
    BorrowerParams(Probability pd, double sigma, Correlation r);

    Probability pd() const { return pd_; }
    double sigma() const { return sigma_; }
    Correlation r() const { return r_; }

private:
    Probability pd_;
    double sigma_;
    Correlation r_;
};

/// Two borrowers exposed to the same exchange rate. Construction checks that
/// the joint law of (fx shock, asset1, asset2) exists.
class PairParams {
public:
    /// Throws ModelValidityError if the implied CorrMatrix3 is not PSD.
    PairParams(BorrowerParams b1, BorrowerParams b2, Correlation rho, FxParams fx);

    const BorrowerParams& b1() const { return b1_; }
    const BorrowerParams& b2() const { return b2_; }
    Correlation rho() const { return rho_; }
    const FxParams& fx() const { return fx_; }

    CorrMatrix3 corr_matrix() const { return {b1_.r(), b2_.r(), rho_}; }

private:
    BorrowerParams b1_;
    BorrowerParams b2_;
    Correlation rho_;
    FxParams fx_;
};

struct AdjustedPair {
    Probability pd1_star;
    Probability pd2_star;
    Correlation rho_star;
};

/// Asset value GBM: A(t) = A0 exp((mu - sigma^2/2) t + sigma W(t)).
class AssetProcess {
public:
    AssetProcess(double a0, double mu, double sigma);

    double a0() const { return a0_; }
    double mu() const { return mu_; }
    double sigma() const { return sigma_; }

private:
    double a0_;
    double mu_;
    double sigma_;
};

/// Debt D due in the foreign currency and today's exchange rate F0.
class DebtSpec {
public:
    DebtSpec(double debt, double f0);

    double debt() const { return debt_; }
    double f0() const { return f0_; }

    /// D / F0: the debt in asset currency at today's rate.
    double rescaled_debt() const { return debt_ / f0_; }

private:
    double debt_;
    double f0_;
};

} // namespace fxcredit
