#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace treemppi {

/// Names one independent random stream: a short label plus integer coordinates
/// (tree, trial, step, sample, ...).
struct StreamKey {
    std::string label;
    std::vector<std::uint64_t> indices;
};

/// Hashes (master_seed, key) into a 64-bit stream seed.
std::uint64_t derive_seed(std::uint64_t master_seed, const StreamKey& key);

/// Counter-based generator. Draw n is mix(seed + n * golden), so a stream is a
/// pure function of its seed and position and can be split without shared state.
///
/// Gaussian draws use the Box-Muller transform, consuming two uniforms per pair
/// and caching the second variate.
class RandomStream {
public:
    using result_type = std::uint64_t;

    explicit RandomStream(std::uint64_t seed = 0) : seed_(seed) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() { return next_u64(); }

    std::uint64_t next_u64();

    /// Uniform on [0, 1).
    double uniform();
    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double gaussian();
    double gaussian(double mean, double stddev) { return mean + stddev * gaussian(); }
    /// Uniform integer in [0, bound); bound must be positive.
    std::uint64_t bounded(std::uint64_t bound);

    /// Independent child stream; does not advance this stream.
    RandomStream split(const StreamKey& key) const { return RandomStream(derive_seed(seed_, key)); }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t position() const { return counter_; }

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
    double cached_gaussian_ = 0.0;
    bool has_cached_gaussian_ = false;
};

inline RandomStream derive(std::uint64_t master_seed, const StreamKey& key) {
    return RandomStream(derive_seed(master_seed, key));
}

/// 64-bit finalizer from SplitMix64.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// FNV-1a over bytes; used for config fingerprints, not for stream seeding.
std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace treemppi
