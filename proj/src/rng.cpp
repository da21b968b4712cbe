#include "treemppi/rng.hpp"

#include <cmath>
#include <cstring>
#include <numbers>

namespace treemppi {

namespace {
constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t absorb(std::uint64_t h, std::uint64_t word) { return mix64((h ^ word) + kGolden); }
}  // namespace

std::uint64_t derive_seed(std::uint64_t master_seed, const StreamKey& key) {
    std::uint64_t h = mix64(master_seed + kGolden);
    const std::string& label = key.label;
    for (std::size_t offset = 0; offset < label.size(); offset += 8) {
        std::uint64_t chunk = 0;
        std::memcpy(&chunk, label.data() + offset, std::min<std::size_t>(8, label.size() - offset));
        h = absorb(h, chunk);
    }
    // Length separators keep ("ab", {1}) and ("a", {...}) apart.
    h = absorb(h, label.size());
    for (std::uint64_t index : key.indices) h = absorb(h, index);
    return absorb(h, key.indices.size() ^ 0xa5a5a5a5a5a5a5a5ULL);
}

std::uint64_t RandomStream::next_u64() {
    ++counter_;
    return mix64(seed_ + counter_ * kGolden);
}

double RandomStream::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double RandomStream::gaussian() {
    if (has_cached_gaussian_) {
        has_cached_gaussian_ = false;
        return cached_gaussian_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    cached_gaussian_ = radius * std::sin(angle);
    has_cached_gaussian_ = true;
    return radius * std::cos(angle);
}

std::uint64_t RandomStream::bounded(std::uint64_t bound) {
    // Lemire's multiply-and-reject.
    unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        while (low < threshold) {
            m = static_cast<unsigned __int128>(next_u64()) * bound;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace treemppi
