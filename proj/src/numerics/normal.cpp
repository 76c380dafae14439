#include "fxcredit/numerics/normal.hpp"

#include "fxcredit/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

namespace fxcredit {

namespace {

constexpr double kSqrt2Pi = 2.50662827463100050242;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) {
        std::ostringstream msg;
        msg << what << ": argument must be finite, got " << x;
        throw DomainError(msg.str());
    }
}

// Acklam's approximation for 0 < p <= 0.5.
double acklam_lower(double p) {
    static constexpr std::array<double, 6> a{-3.969683028665376e+01, 2.209460984245205e+02,
                                             -2.759285104469687e+02, 1.383577518672690e+02,
                                             -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr std::array<double, 5> b{-5.447609879822406e+01, 1.615858368580409e+02,
                                             -1.556989798598866e+02, 6.680131188771972e+01,
                                             -1.328068155288572e+01};
    static constexpr std::array<double, 6> c{-7.784894002430293e-03, -3.223964580411365e-01,
                                             -2.400758277161838e+00, -2.549732539343734e+00,
                                             4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr std::array<double, 4> d{7.784695709041462e-03, 3.224671290700398e-01,
                                             2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

} // namespace

double std_normal_pdf(double x) {
    return std::exp(-0.5 * x * x) / kSqrt2Pi;
}

double std_normal_cdf(double x) {
    require_finite(x, "std_normal_cdf");
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double std_normal_quantile(Probability prob) {
    const double p = prob.value();
    if (p == 0.5)
        return 0.0;
    // 1 - p is exact for p >= 0.5
    const bool upper = p > 0.5;
    const double tail = upper ? 1.0 - p : p;

    double x = acklam_lower(tail);
    for (int i = 0; i < 2; ++i) {
        const double density = std_normal_pdf(x);
        if (density <= 0.0)
            break;
        const double u = (std_normal_cdf(x) - tail) / density;
        x -= u / (1.0 + 0.5 * x * u);
    }
    return upper ? -x : x;
}

double std_normal_quantile(double p) {
    return std_normal_quantile(Probability(p));
}

double bivariate_normal_cdf(double x, double y, Correlation rho_c) {
    require_finite(x, "bivariate_normal_cdf");
    require_finite(y, "bivariate_normal_cdf");
    const double r = rho_c.value();

    if (r == 0.0)
        return std_normal_cdf(x) * std_normal_cdf(y);
    if (r == 1.0)
        return std::min(std_normal_cdf(x), std_normal_cdf(y));
    if (r == -1.0)
        return std::max(0.0, std_normal_cdf(x) + std_normal_cdf(y) - 1.0);

    // Gauss-Legendre half-nodes on [-1, 1]; mirrored below to cover [0, 2].
    static constexpr std::array<double, 3> w6{0.1713244923791705, 0.3607615730481384, 0.4679139345726904};
    static constexpr std::array<double, 3> x6{0.9324695142031522, 0.6612093864662647, 0.2386191860831970};
    static constexpr std::array<double, 6> w12{0.04717533638651177, 0.1069393259953183, 0.1600783285433464,
                                               0.2031674267230659,  0.2334925365383547, 0.2491470458134029};
    static constexpr std::array<double, 6> x12{0.9815606342467191, 0.9041172563704750, 0.7699026741943050,
                                               0.5873179542866171, 0.3678314989981802, 0.1252334085114692};
    static constexpr std::array<double, 10> w20{0.01761400713915212, 0.04060142980038694, 0.06267204833410906,
                                                0.08327674157670475, 0.1019301198172404,  0.1181945319615184,
                                                0.1316886384491766,  0.1420961093183821,  0.1491729864726037,
                                                0.1527533871307259};
    static constexpr std::array<double, 10> x20{0.9931285991850949, 0.9639719272779138, 0.9122344282513259,
                                                0.8391169718222188, 0.7463319064601508, 0.6360536807265150,
                                                0.5108670019508271, 0.3737060887154196, 0.2277858511416451,
                                                0.07652652113349733};

    const double* w = nullptr;
    const double* nodes = nullptr;
    int n = 0;
    if (std::abs(r) < 0.3) {
        w = w6.data(), nodes = x6.data(), n = 3;
    } else if (std::abs(r) < 0.75) {
        w = w12.data(), nodes = x12.data(), n = 6;
    } else {
        w = w20.data(), nodes = x20.data(), n = 10;
    }

    // Work with upper-orthant probability P[X > h, Y > k] = Phi2(x, y; r).
    double h = -x;
    double k = -y;
    double hk = h * k;
    double bvn = 0.0;

    if (std::abs(r) < 0.925) {
        const double hs = 0.5 * (h * h + k * k);
        const double asr = 0.5 * std::asin(r);
        for (int i = 0; i < n; ++i) {
            for (double sgn : {-1.0, 1.0}) {
                const double sn = std::sin(asr * (1.0 + sgn * nodes[i]));
                bvn += w[i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
            }
        }
        bvn = bvn * asr / kTwoPi + std_normal_cdf(-h) * std_normal_cdf(-k);
        return std::clamp(bvn, 0.0, 1.0);
    }

    if (r < 0.0) {
        k = -k;
        hk = -hk;
    }
    const double as = 1.0 - r * r;
    double a = std::sqrt(as);
    const double bs = (h - k) * (h - k);
    const double c = (4.0 - hk) / 8.0;
    const double d = (12.0 - hk) / 80.0;
    double asr = -0.5 * (bs / as + hk);
    if (asr > -100.0)
        bvn = a * std::exp(asr) * (1.0 - c * (bs - as) * (1.0 - d * bs) / 3.0 + c * d * as * as);
    if (hk > -100.0) {
        const double b = std::sqrt(bs);
        const double sp = kSqrt2Pi * std_normal_cdf(-b / a);
        bvn -= std::exp(-0.5 * hk) * sp * b * (1.0 - c * bs * (1.0 - d * bs) / 3.0);
    }
    a *= 0.5;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        for (double sgn : {-1.0, 1.0}) {
            const double xs = std::pow(a * (1.0 + sgn * nodes[i]), 2);
            const double asr_i = -0.5 * (bs / xs + hk);
            if (asr_i > -100.0) {
                const double sp = 1.0 + c * xs * (1.0 + 5.0 * d * xs);
                const double rs = std::sqrt(1.0 - xs);
                const double ep = std::exp(-0.5 * hk * xs / ((1.0 + rs) * (1.0 + rs))) / rs;
                sum += w[i] * std::exp(asr_i) * (sp - ep);
            }
        }
    }
    bvn = (a * sum - bvn) / kTwoPi;

    if (r > 0.0) {
        bvn += std_normal_cdf(-std::max(h, k));
    } else if (h >= k) {
        bvn = -bvn;
    } else {
        const double lower = h < 0.0 ? std_normal_cdf(k) - std_normal_cdf(h)
                                     : std_normal_cdf(-h) - std_normal_cdf(-k);
        bvn = lower - bvn;
    }
    return std::clamp(bvn, 0.0, 1.0);
}

} // namespace fxcredit
