#include "fxcredit/numerics/random.hpp"

#include <cmath>
#include <numbers>

namespace fxcredit {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& lo, std::uint32_t& hi) {
    const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
    lo = static_cast<std::uint32_t>(product);
    hi = static_cast<std::uint32_t>(product >> 32);
}

// 53-bit uniform in (0, 1]
inline double to_unit(std::uint32_t lo, std::uint32_t hi) {
    const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 32) | lo;
    return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

} // namespace

Philox4x32::Block Philox4x32::generate(Block ctr, Key key) {
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            key[0] += kPhiloxW0;
            key[1] += kPhiloxW1;
        }
        std::uint32_t lo0, hi0, lo1, hi1;
        mulhilo(kPhiloxM0, ctr[0], lo0, hi0);
        mulhilo(kPhiloxM1, ctr[2], lo1, hi1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
}

std::array<double, 3> NormalTripleStream::at(std::uint64_t index) const {
    const auto stream_lo = static_cast<std::uint32_t>(stream_id_);
    const auto stream_hi = static_cast<std::uint32_t>(stream_id_ >> 32);
    const std::uint64_t block = 2 * index;

    const auto b0 = Philox4x32::generate(
        {static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32), stream_lo, stream_hi}, key_);
    const auto b1 = Philox4x32::generate(
        {static_cast<std::uint32_t>(block + 1), static_cast<std::uint32_t>((block + 1) >> 32), stream_lo, stream_hi},
        key_);

    constexpr double two_pi = 2.0 * std::numbers::pi;
    const double r0 = std::sqrt(-2.0 * std::log(to_unit(b0[0], b0[1])));
    const double t0 = two_pi * to_unit(b0[2], b0[3]);
    const double r1 = std::sqrt(-2.0 * std::log(to_unit(b1[0], b1[1])));
    const double t1 = two_pi * to_unit(b1[2], b1[3]);
    return {r0 * std::cos(t0), r0 * std::sin(t0), r1 * std::cos(t1)};
}

std::array<double, 3> sample_std_normal_vec(NormalTripleStream& stream, const Cholesky3& factor) {
    return factor.apply(stream.next());
}

} // namespace fxcredit
