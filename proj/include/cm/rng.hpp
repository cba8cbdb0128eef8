// Deterministic RNG substreams: every replication (and every named auxiliary
// stream) derives its own generator from (seed, counter) via splitmix64, so
// results do not depend on thread count or interleaving.
#pragma once

#include <cstdint>
#include <random>

namespace cm {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Mix a base seed with a stream index into a full 64-bit state.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(splitmix64(seed) ^ splitmix64(stream * 0x9e3779b97f4a7c15ULL + 0x243f6a8885a308d3ULL));
}

using Rng = std::mt19937_64;

// Generator for one substream; identical (seed, stream) pairs give identical streams.
inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
    return Rng(mix_seed(seed, stream));
}

// Uniform integer in [lo, hi] inclusive.
inline int uniform_int(Rng& rng, int lo, int hi) {
    std::uniform_int_distribution<int> dist(lo, hi);
    return dist(rng);
}

} // namespace cm
