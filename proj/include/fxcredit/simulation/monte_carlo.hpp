#pragma once

#include "fxcredit/model/params.hpp"
#include "fxcredit/numerics/types.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <utility>

namespace fxcredit {

enum class SimMode { reduced, gbm_path };

struct SimConfig {
    std::uint64_t n_samples = 1'000'000;
    std::uint64_t seed = 0;
    SimMode mode = SimMode::reduced;
    int n_steps = 1;
    /// Worker threads; 0 means std::thread::hardware_concurrency().
    unsigned threads = 0;
    /// Samples per chunk. Each chunk draws from stream (seed, chunk index),
    /// so results depend on chunk_size but not on threads.
    std::uint64_t chunk_size = 1u << 16;

    /// Throws DomainError on n_samples, n_steps or chunk_size < 1.
    void validate() const;
};

struct SimResult {
    double pd1_hat = 0.0;
    double pd2_hat = 0.0;
    /// Sample correlation of the continuous latent scores.
    double rho_hat = 0.0;
    double joint_default_hat = 0.0;
    double se_pd1 = 0.0;
    double se_pd2 = 0.0;
    double se_joint = 0.0;
    /// Asymptotic (1 - rho_hat^2) / sqrt(n).
    double se_rho = 0.0;
    std::uint64_t n_samples = 0;

    bool operator==(const SimResult&) const = default;
};

/// sqrt(rate (1 - rate) / n)
double standard_error(double rate, std::uint64_t n);

/// (1 - rho^2) / sqrt(n)
double correlation_standard_error(double rho, std::uint64_t n);

/// Samples (z, a1, a2) with the pair's correlation matrix, sets F = nu + tau z
/// and records defaults F/sigma_i + a_i <= c_i. Requires cfg.mode == reduced.
SimResult simulate_reduced(const PairParams& pair, const SimConfig& cfg);

/// Log-space GBM drivers of one path: x = (log F(t), log A1(t), log A2(t)).
struct GbmDrivers {
    std::array<double, 3> initial{};   ///< log F0, log A1(0), log A2(0)
    std::array<double, 3> drift{};     ///< nu, mu1 - sigma1^2/2, mu2 - sigma2^2/2
    std::array<double, 3> vol{};       ///< tau, sigma1, sigma2

    static GbmDrivers from(const AssetProcess& a1, const AssetProcess& a2, double f0, const FxParams& fx);
};

/// Terminal log values at t = 1 after exact lognormal steps of length
/// 1/shocks.size(); each shock is a correlated standard normal triple.
std::array<double, 3> terminal_log_values(const GbmDrivers& drivers, std::span<const std::array<double, 3>> shocks);

/// Full-path simulation of the asset values and the exchange rate with the
/// literal default test F(1) A_i(1) <= D_i. Requires cfg.mode == gbm_path.
/// The latent score of borrower i is log(F(1) A_i(1)).
SimResult simulate_gbm_paths(const AssetProcess& asset1, const AssetProcess& asset2,
                             const std::pair<DebtSpec, DebtSpec>& debts, const FxParams& fx,
                             const CorrMatrix3& corr, const SimConfig& cfg);

} // namespace fxcredit
