#pragma once

#include <cstdint>
#include <vector>

namespace whittle {

// SplitMix64 mixing step; also used to derive independent stream seeds.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Small deterministic generator (SplitMix64). The standard <random>
// distributions are not bit-stable across library implementations, and the
// simulation contract requires byte-identical output for identical seeds,
// so draws are produced here directly.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform double in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool next_bernoulli(double prob) { return next_double() < prob; }

  private:
    std::uint64_t state_;
};

// Derives the seed of an independent substream. Streams are keyed by
// (master seed, stream id, salt), so adding arms or extra consumers never
// perturbs the draws of existing streams.
inline std::uint64_t stream_seed(std::uint64_t master, std::uint64_t stream_id,
                                 std::uint64_t salt = 0) {
    return mix64(mix64(master ^ 0xA5A5A5A55A5A5A5AULL) ^ mix64(stream_id) ^ mix64(salt ^ 0x1234567));
}

// One independent generator per arm plus salted side-channels, all derived
// from a single master seed.
class ArmStreams {
  public:
    ArmStreams(std::uint64_t master, std::size_t n_arms, std::uint64_t salt = 0) {
        streams_.reserve(n_arms);
        for (std::size_t i = 0; i < n_arms; ++i)
            streams_.emplace_back(stream_seed(master, i + 1, salt));
    }

    SplitMix64& arm(std::size_t i) { return streams_[i]; }
    std::size_t size() const { return streams_.size(); }

  private:
    std::vector<SplitMix64> streams_;
};

}  // namespace whittle
