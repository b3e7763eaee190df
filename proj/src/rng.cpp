#include "pcoal/rng.hpp"

#include <cmath>

namespace pcoal {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_index)
    : seed_{seed}, stream_{stream_index} {
    std::uint64_t mix = seed;
    const std::uint64_t seed_hash = splitmix64(mix);
    std::uint64_t x = seed_hash ^ (stream_index * 0xd1342543de82ef95ULL + 0x632be59bd9b4e019ULL);
    // Burn one output so adjacent stream indices decorrelate before use.
    splitmix64(x);
    for (auto& word : state_) word = splitmix64(x);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
    std::uint64_t x = seed ^ (tag * 0xa0761d6478bd642fULL);
    splitmix64(x);
    return splitmix64(x);
}

double RngStream::exponential() { return -std::log(uniform_open()); }

}  // namespace pcoal
