#pragma once

#include "fxcredit/numerics/cholesky.hpp"

#include <array>
#include <cstdint>

namespace fxcredit {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// A pure function of (counter, key): output for a given seed and position
/// is the same on every platform. Known-answer vectors from Random123 are
/// checked in the unit tests.
struct Philox4x32 {
    using Block = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Block generate(Block counter, Key key);
};

/// Random-access stream of independent standard normal triples.
///
/// Stream algorithm version 1:
///   key      = (seed_lo, seed_hi)
///   triple k = Box-Muller on Philox blocks 2k and 2k+1 with
///              counter = (block_lo, block_hi, stream_lo, stream_hi);
///   each block yields two 53-bit uniforms in (0, 1] and two normals,
///   the fourth normal of a triple is discarded.
/// Distinct (seed, stream_id) pairs give independent streams, so parallel
/// chunks keyed by chunk index draw the same numbers under any schedule.
/// Uses std::log/sqrt/cos/sin, so bit-identity across platforms holds to
/// the extent the C library's elementary functions agree.
class NormalTripleStream {
public:
    static constexpr int algorithm_version = 1;

    NormalTripleStream(std::uint64_t seed, std::uint64_t stream_id, std::uint64_t position = 0)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          stream_id_(stream_id), position_(position) {}

    std::array<double, 3> at(std::uint64_t index) const;

    std::array<double, 3> next() { return at(position_++); }

    std::uint64_t position() const { return position_; }
    std::uint64_t stream_id() const { return stream_id_; }

private:
    Philox4x32::Key key_;
    std::uint64_t stream_id_;
    std::uint64_t position_;
};

/// Correlated standard normal triple (z, a1, a2) = L * (next independent triple).
std::array<double, 3> sample_std_normal_vec(NormalTripleStream& stream, const Cholesky3& factor);

} // namespace fxcredit
