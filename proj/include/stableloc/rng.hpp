// Seeded, portable random source. The engine is std::mt19937_64, whose output
// sequence is fully pinned by the standard; uniform conversions are done here
// rather than with std::uniform_*_distribution, whose results differ across
// standard libraries. Substreams are derived from (seed, stream id) with a
// SplitMix64 hash, so parallel/batched generation stays reproducible.
#pragma once

#include <cstdint>
#include <random>

namespace stableloc {

inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

    // Independent substream; depends only on the constructing seed and the
    // stream id, never on how many values were drawn so far.
    Rng split(std::uint64_t stream) const { return Rng(splitmix64(seed_ ^ splitmix64(stream + 1))); }

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [lo, hi); returns lo when the interval is empty.
    double uniform(double lo, double hi) {
        if (!(lo < hi)) return lo;
        const double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;  // [0, 1)
        return lo + (hi - lo) * u;
    }

    // Uniform integer in [lo, hi], inclusive.
    int uniform_int(int lo, int hi) {
        if (hi <= lo) return lo;
        const std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1;
        // Rejection sampling keeps the draw exactly uniform.
        const std::uint64_t bound = UINT64_MAX - UINT64_MAX % range;
        std::uint64_t r = next_u64();
        while (r >= bound) r = next_u64();
        return lo + static_cast<int>(r % range);
    }

    std::uint64_t seed() const { return seed_; }

  private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

}  // namespace stableloc
