#pragma once

#include <cstdint>

namespace nrlab {

// SplitMix64 finalizer (Steele/Lea/Flood; Vigna's fixed-increment variant).
// Used both as the per-stream generator and as the key-derivation mixer.
inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

inline constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Stream labels keep substreams for different purposes disjoint even when
// their counter coordinates collide.
enum class StreamTag : std::uint64_t {
    ErrorProbs = 1,
    Row = 2,
    SweepCell = 3,
    Permutation = 4,
};

// Derives a substream key from (seed, tag, a, b) by chained mixing. The same
// coordinates always yield the same key, so work can be scheduled in any
// order or degree of parallelism without changing results.
inline constexpr std::uint64_t derive_stream(std::uint64_t seed, StreamTag tag,
                                             std::uint64_t a = 0,
                                             std::uint64_t b = 0) {
    std::uint64_t k = mix64(seed + kGolden * static_cast<std::uint64_t>(tag));
    k = mix64(k + kGolden * (a + 1));
    k = mix64(k + kGolden * (b + 1));
    return k;
}

class Substream {
  public:
    explicit constexpr Substream(std::uint64_t key) : state_(key) {}

    constexpr std::uint64_t next_u64() {
        std::uint64_t z = (state_ += kGolden);
        return mix64(z);
    }

    // Uniform double in [0, 1) with 53 random bits.
    constexpr double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Exact at the boundaries: p = 0 never fires, p = 1 always fires.
    constexpr bool bernoulli(double p) { return uniform() < p; }

    // Integer in [0, bound) via rejection-free multiply-shift; bias is
    // negligible for the bounds used here (hundreds of items).
    constexpr std::uint64_t below(std::uint64_t bound) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
    }

  private:
    std::uint64_t state_;
};

}  // namespace nrlab
