#include "fxcredit/simulation/monte_carlo.hpp"

#include "fxcredit/errors.hpp"
#include "fxcredit/model/adjustment.hpp"
#include "fxcredit/numerics/cholesky.hpp"
#include "fxcredit/numerics/random.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>
#include <vector>

namespace fxcredit {

namespace {

// Default counts and co-moments of the two latent scores over a chunk.
struct Tally {
    std::uint64_t n = 0;
    std::uint64_t d1 = 0;
    std::uint64_t d2 = 0;
    std::uint64_t d12 = 0;
    double mean_x = 0.0;
    double mean_y = 0.0;
    double m2_x = 0.0;
    double m2_y = 0.0;
    double c_xy = 0.0;

    void add(double x, double y, bool def1, bool def2) {
        ++n;
        d1 += def1;
        d2 += def2;
        d12 += def1 && def2;
        const double dx = x - mean_x;
        const double dy = y - mean_y;
        const double inv_n = 1.0 / static_cast<double>(n);
        mean_x += dx * inv_n;
        mean_y += dy * inv_n;
        const double dy_new = y - mean_y;
        m2_x += dx * (x - mean_x);
        m2_y += dy * dy_new;
        c_xy += dx * dy_new;
    }

    // Chan et al. pairwise merge
    void merge(const Tally& o) {
        if (o.n == 0)
            return;
        if (n == 0) {
            *this = o;
            return;
        }
        const double na = static_cast<double>(n);
        const double nb = static_cast<double>(o.n);
        const double nt = na + nb;
        const double dx = o.mean_x - mean_x;
        const double dy = o.mean_y - mean_y;
        m2_x += o.m2_x + dx * dx * na * nb / nt;
        m2_y += o.m2_y + dy * dy * na * nb / nt;
        c_xy += o.c_xy + dx * dy * na * nb / nt;
        mean_x += dx * nb / nt;
        mean_y += dy * nb / nt;
        n += o.n;
        d1 += o.d1;
        d2 += o.d2;
        d12 += o.d12;
    }
};

// Runs chunk_fn(chunk_index, first_sample, count, tally) for every chunk on a
// worker pool and merges the tallies in chunk order.
template <typename ChunkFn>
Tally run_chunks(const SimConfig& cfg, ChunkFn chunk_fn) {
    const std::uint64_t n_chunks = (cfg.n_samples + cfg.chunk_size - 1) / cfg.chunk_size;
    std::vector<Tally> tallies(n_chunks);

    unsigned workers = cfg.threads != 0 ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, n_chunks));

    std::atomic<std::uint64_t> next{0};
    auto work = [&] {
        for (std::uint64_t c = next++; c < n_chunks; c = next++) {
            const std::uint64_t first = c * cfg.chunk_size;
            const std::uint64_t count = std::min(cfg.chunk_size, cfg.n_samples - first);
            chunk_fn(c, count, tallies[c]);
        }
    };

    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned i = 0; i < workers; ++i)
            pool.emplace_back(work);
    }

    Tally total;
    for (const auto& t : tallies)
        total.merge(t);
    return total;
}

SimResult summarize(const Tally& t) {
    SimResult r;
    const auto n = static_cast<double>(t.n);
    r.n_samples = t.n;
    r.pd1_hat = static_cast<double>(t.d1) / n;
    r.pd2_hat = static_cast<double>(t.d2) / n;
    r.joint_default_hat = static_cast<double>(t.d12) / n;
    const double denom = std::sqrt(t.m2_x) * std::sqrt(t.m2_y);
    r.rho_hat = denom > 0.0 ? std::clamp(t.c_xy / denom, -1.0, 1.0) : 0.0;
    r.se_pd1 = standard_error(r.pd1_hat, t.n);
    r.se_pd2 = standard_error(r.pd2_hat, t.n);
    r.se_joint = standard_error(r.joint_default_hat, t.n);
    r.se_rho = correlation_standard_error(r.rho_hat, t.n);
    return r;
}

} // namespace

void SimConfig::validate() const {
    if (n_samples < 1)
        throw DomainError("n_samples must be >= 1");
    if (n_steps < 1)
        throw DomainError("n_steps must be >= 1");
    if (chunk_size < 1)
        throw DomainError("chunk_size must be >= 1");
}

double standard_error(double rate, std::uint64_t n) {
    return std::sqrt(rate * (1.0 - rate) / static_cast<double>(n));
}

double correlation_standard_error(double rho, std::uint64_t n) {
    return (1.0 - rho * rho) / std::sqrt(static_cast<double>(n));
}

SimResult simulate_reduced(const PairParams& pair, const SimConfig& cfg) {
    cfg.validate();
    if (cfg.mode != SimMode::reduced)
        throw DomainError("simulate_reduced requires mode = reduced");

    const Cholesky3 factor = cholesky3(pair.corr_matrix());
    const double nu = pair.fx().nu();
    const double tau = pair.fx().tau();
    const double inv_s1 = 1.0 / pair.b1().sigma();
    const double inv_s2 = 1.0 / pair.b2().sigma();
    const double c1 = default_threshold(pair.b1().pd());
    const double c2 = default_threshold(pair.b2().pd());

    const Tally total = run_chunks(cfg, [&](std::uint64_t chunk, std::uint64_t count, Tally& tally) {
        NormalTripleStream stream(cfg.seed, chunk);
        for (std::uint64_t i = 0; i < count; ++i) {
            const auto [z, a1, a2] = sample_std_normal_vec(stream, factor);
            const double fx_log_change = nu + tau * z;
            const double score1 = fx_log_change * inv_s1 + a1;
            const double score2 = fx_log_change * inv_s2 + a2;
            tally.add(score1, score2, score1 <= c1, score2 <= c2);
        }
    });
    return summarize(total);
}

GbmDrivers GbmDrivers::from(const AssetProcess& a1, const AssetProcess& a2, double f0, const FxParams& fx) {
    GbmDrivers d;
    d.initial = {std::log(f0), std::log(a1.a0()), std::log(a2.a0())};
    // nu is the mean of log(F(1)/F0), so it enters the log increment directly
    d.drift = {fx.nu(), a1.mu() - 0.5 * a1.sigma() * a1.sigma(), a2.mu() - 0.5 * a2.sigma() * a2.sigma()};
    d.vol = {fx.tau(), a1.sigma(), a2.sigma()};
    return d;
}

std::array<double, 3> terminal_log_values(const GbmDrivers& drivers, std::span<const std::array<double, 3>> shocks) {
    const double dt = 1.0 / static_cast<double>(shocks.size());
    const double sqrt_dt = std::sqrt(dt);
    std::array<double, 3> x = drivers.initial;
    for (const auto& shock : shocks)
        for (int k = 0; k < 3; ++k)
            x[k] += drivers.drift[k] * dt + drivers.vol[k] * sqrt_dt * shock[k];
    return x;
}

SimResult simulate_gbm_paths(const AssetProcess& asset1, const AssetProcess& asset2,
                             const std::pair<DebtSpec, DebtSpec>& debts, const FxParams& fx,
                             const CorrMatrix3& corr, const SimConfig& cfg) {
    cfg.validate();
    if (cfg.mode != SimMode::gbm_path)
        throw DomainError("simulate_gbm_paths requires mode = gbm_path");

    if (debts.first.f0() != debts.second.f0())
        throw DomainError("both borrowers must quote debt against the same spot exchange rate F0");

    const Cholesky3 factor = cholesky3(corr);
    const GbmDrivers drivers = GbmDrivers::from(asset1, asset2, debts.first.f0(), fx);
    const double log_debt1 = std::log(debts.first.debt());
    const double log_debt2 = std::log(debts.second.debt());
    const auto steps = static_cast<std::uint64_t>(cfg.n_steps);

    const Tally total = run_chunks(cfg, [&](std::uint64_t chunk, std::uint64_t count, Tally& tally) {
        NormalTripleStream stream(cfg.seed, chunk);
        std::vector<std::array<double, 3>> shocks(steps);
        for (std::uint64_t i = 0; i < count; ++i) {
            for (auto& shock : shocks)
                shock = sample_std_normal_vec(stream, factor);
            const auto [log_fx, log_a1, log_a2] = terminal_log_values(drivers, shocks);
            // F(1) A_i(1) <= D_i in logs
            const double score1 = log_fx + log_a1;
            const double score2 = log_fx + log_a2;
            tally.add(score1, score2, score1 <= log_debt1, score2 <= log_debt2);
        }
    });
    return summarize(total);
}

} // namespace fxcredit
