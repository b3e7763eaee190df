#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace pcoal {

/// xoshiro256** generator whose state is derived from (seed, stream_index)
/// through SplitMix64. Distinct stream indices give independent streams, so a
/// replica's variates do not depend on which thread runs it.
class RngStream {
public:
    using result_type = std::uint64_t;

    RngStream(std::uint64_t seed, std::uint64_t stream_index);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform on the open interval (0, 1).
    double uniform_open() {
        return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard exponential, -ln U.
    double exponential();

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_index() const { return stream_; }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> state_{};
    std::uint64_t seed_;
    std::uint64_t stream_;
};

/// Seed for an independent sub-experiment, e.g. the second of two estimators
/// that must not share variates.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag);

}  // namespace pcoal
