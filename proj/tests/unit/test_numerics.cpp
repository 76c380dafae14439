#include "fxcredit/errors.hpp"
#include "fxcredit/numerics/cholesky.hpp"
#include "fxcredit/numerics/normal.hpp"
#include "fxcredit/numerics/random.hpp"

#include "doctest.h"
#include "oracles/quantile_table.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

using namespace fxcredit;
using fxcredit::testing::kQuantileTable;

namespace {

struct CdfRef {
    double x;
    double p;
};

const CdfRef kCdfTable[] = {
    {-8, 6.2209605742717841235e-16},  {-5, 2.8665157187919391167e-7},  {-3.5, 0.00023262907903552503635},
    {-1, 0.15865525393145705141},     {-0.5, 0.30853753872598689636},  {0, 0.5},
    {0.3, 0.61791142218895263731},    {4, 0.99996832875816688008},
};

struct BvnRef {
    double x, y, rho, p;
};

// direct 2-D quadrature of the density in mpmath
const BvnRef kBvnTable[] = {
    {0, 0, 0.36, 0.308611655622480612},
    {-2.08074871, -2.08074871, 0.36, 0.0018904444654659749672},
    {-1, 0.5, -0.7, 0.037166649186735598901},
    {1.5, -0.3, 0.95, 0.3820885777003133148},
    {-2, -2, 0.99, 0.019711642648668947439},
    {0.7, 1.2, -0.95, 0.64296667757356409949},
    {-3, -1, 0.5, 0.0010365788486555320167},
};

CorrMatrix3 corr(double r1, double r2, double rho) {
    return {Correlation(r1), Correlation(r2), Correlation(rho)};
}

// Random correlation matrix G G^T rescaled to unit diagonal; PSD by construction.
CorrMatrix3 random_psd(std::mt19937_64& gen, int rank) {
    std::normal_distribution<double> n01;
    double g[3][3] = {};
    for (auto& row : g)
        for (int k = 0; k < rank; ++k)
            row[k] = n01(gen);
    auto dot = [&](int i, int j) {
        double s = 0.0;
        for (int k = 0; k < 3; ++k)
            s += g[i][k] * g[j][k];
        return s;
    };
    auto c = [&](int i, int j) { return std::clamp(dot(i, j) / std::sqrt(dot(i, i) * dot(j, j)), -1.0, 1.0); };
    return corr(c(0, 1), c(0, 2), c(1, 2));
}

} // namespace

TEST_CASE("probability and correlation reject values outside their domains") {
    CHECK_THROWS_AS(Probability(0.0), DomainError);
    CHECK_THROWS_AS(Probability(1.0), DomainError);
    CHECK_THROWS_AS(Probability(std::numeric_limits<double>::quiet_NaN()), DomainError);
    CHECK_THROWS_AS(Probability(std::numeric_limits<double>::infinity()), DomainError);
    CHECK(Probability(0.25).value() == 0.25);

    CHECK_THROWS_AS(Correlation(1.0000001), DomainError);
    CHECK_THROWS_AS(Correlation(std::numeric_limits<double>::quiet_NaN()), DomainError);
    CHECK(Correlation(-1.0).value() == -1.0);
}

TEST_CASE("std_normal_cdf") {
    CHECK(std_normal_cdf(0.0) == 0.5);
    CHECK(std::abs(std_normal_cdf(1.959963985) - 0.975) <= 1e-9);
    CHECK(std::abs(std_normal_cdf(-2.326347874) - 0.01) <= 1e-9);

    for (const auto& ref : kCdfTable)
        CHECK(std::abs(std_normal_cdf(ref.x) - ref.p) <= 1e-15);

    double prev = 0.0;
    for (double x = -9.0; x <= 9.0; x += 0.01) {
        const double v = std_normal_cdf(x);
        CHECK(v >= prev);
        CHECK(std::abs(std_normal_cdf(-x) - (1.0 - v)) <= 1e-15);
        prev = v;
    }

    CHECK_THROWS_AS(std_normal_cdf(std::numeric_limits<double>::infinity()), DomainError);
    CHECK_THROWS_AS(std_normal_cdf(std::numeric_limits<double>::quiet_NaN()), DomainError);
}

TEST_CASE("std_normal_quantile against the high-precision table") {
    CHECK(std_normal_quantile(0.5) == 0.0);
    CHECK(std::abs(std_normal_quantile(0.01) - (-2.326347874)) <= 1e-8);
    CHECK(std::abs(std_normal_quantile(0.975) - 1.959963985) <= 1e-8);
    for (const auto& ref : kQuantileTable) {
        INFO("p = " << ref.p);
        // representation error of the decimal p, propagated through dq/dp = 1/phi(q)
        const double input_error = 0.5 * (std::nextafter(ref.p, 1.0) - ref.p) / std_normal_pdf(ref.x);
        CHECK(std::abs(std_normal_quantile(ref.p) - ref.x) <= 1e-12 + input_error);
    }
}

TEST_CASE("std_normal_quantile inverts the cdf") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> log_p(std::log(1e-300), std::log(0.5));
    for (int i = 0; i < 20000; ++i) {
        const double p = std::exp(log_p(gen));
        const double x = std_normal_quantile(p);
        CHECK(std::abs(std_normal_cdf(x) - p) <= 1e-12);
        // relative accuracy in the far tail, limited by the spacing of x itself
        CHECK(std::abs(std_normal_cdf(x) - p) <= 4e-16 * std::max(1.0, x * x) * p);
    }

    // probability-space round trip on (1e-10, 1 - 1e-10)
    for (double x = -6.3; x <= 6.3; x += 0.001) {
        const double p = std_normal_cdf(x);
        CHECK(std::abs(std_normal_cdf(std_normal_quantile(p)) - p) <= 1e-9);
    }
}

TEST_CASE("std_normal_quantile is antisymmetric") {
    // dyadic p so that 1 - p is exact
    for (int k = 1; k < (1 << 12); k += 7) {
        const double p = std::ldexp(static_cast<double>(k), -13);
        CHECK(std::abs(std_normal_quantile(1.0 - p) + std_normal_quantile(p)) <= 1e-12);
    }
}

TEST_CASE("std_normal_quantile domain errors") {
    CHECK_THROWS_AS(std_normal_quantile(0.0), DomainError);
    CHECK_THROWS_AS(std_normal_quantile(1.0), DomainError);
    CHECK_THROWS_AS(std_normal_quantile(-0.1), DomainError);
    CHECK_THROWS_AS(std_normal_quantile(std::numeric_limits<double>::quiet_NaN()), DomainError);
    // smallest subnormal still gives a finite answer
    CHECK(std::isfinite(std_normal_quantile(std::numeric_limits<double>::denorm_min())));
}

TEST_CASE("bivariate_normal_cdf closed-form cases") {
    for (int i = -19; i <= 19; ++i) {
        const double rho = i / 20.0;
        const double expected = 0.25 + std::asin(rho) / (2.0 * std::numbers::pi);
        INFO("rho = " << rho);
        CHECK(std::abs(bivariate_normal_cdf(0.0, 0.0, Correlation(rho)) - expected) <= 5e-9);
        CHECK(std::abs(bivariate_normal_cdf(0.0, 0.0, Correlation(rho)) - expected) <= 1e-14);
    }
    CHECK(bivariate_normal_cdf(0.0, 0.0, Correlation(1.0)) == 0.5);
    CHECK(bivariate_normal_cdf(0.0, 0.0, Correlation(-1.0)) == 0.0);
    CHECK(bivariate_normal_cdf(1.0, 0.4, Correlation(-1.0)) ==
          doctest::Approx(std_normal_cdf(1.0) + std_normal_cdf(0.4) - 1.0));
    CHECK(bivariate_normal_cdf(0.3, -0.4, Correlation(-1.0)) == 0.0);
    CHECK(bivariate_normal_cdf(0.3, -0.4, Correlation(1.0)) == std_normal_cdf(-0.4));

    for (double x : {-3.0, -1.2, 0.0, 0.7, 2.5})
        for (double y : {-2.0, 0.1, 1.9})
            CHECK(bivariate_normal_cdf(x, y, Correlation(0.0)) == std_normal_cdf(x) * std_normal_cdf(y));
}

TEST_CASE("bivariate_normal_cdf against quadrature references") {
    for (const auto& ref : kBvnTable) {
        INFO(ref.x << ", " << ref.y << ", " << ref.rho);
        CHECK(std::abs(bivariate_normal_cdf(ref.x, ref.y, Correlation(ref.rho)) - ref.p) <= 1e-12);
    }
}

TEST_CASE("bivariate_normal_cdf near |rho| = 1 approaches the limits") {
    for (double x : {-2.0, -0.5, 0.0, 1.0}) {
        for (double y : {-1.5, 0.2, 2.0}) {
            const double upper = std::min(std_normal_cdf(x), std_normal_cdf(y));
            const double lower = std::max(0.0, std_normal_cdf(x) + std_normal_cdf(y) - 1.0);
            CHECK(std::abs(bivariate_normal_cdf(x, y, Correlation(1.0 - 1e-12)) - upper) <= 1e-6);
            CHECK(std::abs(bivariate_normal_cdf(x, y, Correlation(-1.0 + 1e-12)) - lower) <= 1e-6);
        }
    }
}

TEST_CASE("bivariate_normal_cdf is monotone in x, y and rho") {
    const std::vector<double> grid{-4.0, -2.5, -1.0, -0.3, 0.0, 0.4, 1.1, 2.2, 3.5};
    for (int ri = -20; ri <= 20; ++ri) {
        const Correlation rho(ri / 20.0);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            for (std::size_t j = 0; j < grid.size(); ++j) {
                const double v = bivariate_normal_cdf(grid[i], grid[j], rho);
                CHECK(v >= 0.0);
                CHECK(v <= 1.0);
                if (i > 0)
                    CHECK(v >= bivariate_normal_cdf(grid[i - 1], grid[j], rho) - 1e-15);
                if (j > 0)
                    CHECK(v >= bivariate_normal_cdf(grid[i], grid[j - 1], rho) - 1e-15);
                if (ri > -20)
                    CHECK(v >= bivariate_normal_cdf(grid[i], grid[j], Correlation((ri - 1) / 20.0)) - 1e-15);
            }
        }
    }
}

TEST_CASE("bivariate_normal_cdf matches a Monte Carlo estimate at rho = 0.36") {
    const Cholesky3 f = cholesky3(corr(0.0, 0.0, 0.36));
    NormalTripleStream stream(2024, 0);
    const int n = 1'000'000;
    int hits = 0;
    for (int i = 0; i < n; ++i) {
        const auto v = sample_std_normal_vec(stream, f);
        hits += v[1] <= 0.0 && v[2] <= 0.0;
    }
    const double est = static_cast<double>(hits) / n;
    const double exact = bivariate_normal_cdf(0.0, 0.0, Correlation(0.36));
    CHECK(std::abs(est - exact) <= 3.0 * std::sqrt(exact * (1 - exact) / n));
}

TEST_CASE("cholesky3 examples") {
    const Cholesky3 id = cholesky3(corr(0, 0, 0));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            CHECK(id(i, j) == (i == j ? 1.0 : 0.0));

    const Cholesky3 f = cholesky3(corr(0, 0, 0.2));
    CHECK(f(2, 1) == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(f(2, 2) == doctest::Approx(std::sqrt(0.96)).epsilon(1e-15));

    // det = 1 - 1 - 0.25 = -0.25
    CHECK_THROWS_AS(cholesky3(corr(1.0, 0.0, 0.5)), ModelValidityError);
    try {
        cholesky3(corr(1.0, 0.0, 0.5));
    } catch (const ModelValidityError& e) {
        CHECK(std::string(e.what()).find("determinant") != std::string::npos);
    }
    CHECK_THROWS_AS(cholesky3(corr(0.9, -0.9, 0.9)), ModelValidityError);
}

TEST_CASE("cholesky3 handles singular PSD matrices") {
    // r1 = 1 makes asset1 a copy of the fx shock; PSD iff rho == r2
    const CorrMatrix3 m = corr(1.0, 0.0, 0.0);
    CHECK(m.determinant() == 0.0);
    CHECK(m.is_psd());
    const Cholesky3 f = cholesky3(m);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k)
                s += f(i, k) * f(j, k);
            CHECK(std::abs(s - m.at(i, j)) <= 1e-12);
        }
}

TEST_CASE("cholesky3 reconstructs random PSD matrices") {
    std::mt19937_64 gen(11);
    for (int trial = 0; trial < 1000; ++trial) {
        const CorrMatrix3 m = random_psd(gen, trial % 5 == 0 ? 2 : 3);
        REQUIRE(m.is_psd());
        const Cholesky3 f = cholesky3(m);
        for (int i = 0; i < 3; ++i) {
            CHECK(f(i, i) >= 0.0);
            for (int j = i + 1; j < 3; ++j)
                CHECK(f(i, j) == 0.0);
            for (int j = 0; j < 3; ++j) {
                double s = 0.0;
                for (int k = 0; k < 3; ++k)
                    s += f(i, k) * f(j, k);
                CHECK(std::abs(s - m.at(i, j)) <= 1e-12);
            }
        }
    }
}

TEST_CASE("PSD check rejects indefinite fixtures") {
    CHECK_FALSE(corr(0.9, -0.9, 0.9).is_psd());
    CHECK_FALSE(corr(0.8, 0.8, -0.5).is_psd());
    CHECK_FALSE(corr(-0.7, -0.7, -0.7).is_psd());
    CHECK(corr(0.5, 0.5, 0.5).is_psd());
}

TEST_CASE("Philox4x32-10 known-answer vectors") {
    using B = Philox4x32::Block;
    CHECK(Philox4x32::generate(B{0, 0, 0, 0}, {0, 0}) == B{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(Philox4x32::generate(B{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          B{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(Philox4x32::generate(B{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          B{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("normal triple stream is deterministic and random access") {
    NormalTripleStream a(42, 3);
    NormalTripleStream b(42, 3);
    for (int i = 0; i < 100; ++i)
        CHECK(a.next() == b.next());
    CHECK(a.position() == 100);
    NormalTripleStream c(42, 3, 57);
    CHECK(c.next() == NormalTripleStream(42, 3).at(57));

    CHECK(NormalTripleStream(42, 3).at(0) != NormalTripleStream(43, 3).at(0));
    CHECK(NormalTripleStream(42, 3).at(0) != NormalTripleStream(42, 4).at(0));
}

TEST_CASE("sampled triples have standard marginals and the target correlation") {
    const Cholesky3 f = cholesky3(corr(0.0, 0.0, 0.2));
    NormalTripleStream stream(99, 0);
    const int n = 1'000'000;
    double sum[3] = {}, sq[3] = {}, cross12 = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto v = sample_std_normal_vec(stream, f);
        for (int k = 0; k < 3; ++k) {
            sum[k] += v[k];
            sq[k] += v[k] * v[k];
        }
        cross12 += v[1] * v[2];
    }
    for (int k = 0; k < 3; ++k) {
        CHECK(std::abs(sum[k] / n) <= 3.0 / std::sqrt(n));
        CHECK(std::abs(sq[k] / n - 1.0) <= 3.0 * std::sqrt(2.0 / n));
    }
    const double m1 = sum[1] / n, m2 = sum[2] / n;
    const double cov = cross12 / n - m1 * m2;
    const double emp_corr = cov / std::sqrt((sq[1] / n - m1 * m1) * (sq[2] / n - m2 * m2));
    CHECK(std::abs(emp_corr - 0.2) <= 3.0 * (1 - 0.04) / std::sqrt(n));
}
