#pragma once

#include <cstdint>

namespace renderproof {

// SplitMix64 finalizer. Bijective with strong avalanche; the basis of every
// random stream in the renderer.
constexpr uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

constexpr uint64_t hash_combine(uint64_t a, uint64_t b) { return mix64(mix64(a) ^ b); }

// Counter-based sample stream keyed by (seed, element, sample, bounce, dimension).
// Every draw is a pure function of its key, so results do not depend on thread
// scheduling or on how many draws other paths consumed.
class PathRng {
public:
    PathRng(uint64_t seed, uint64_t element, uint32_t sample)
        : base_(mix64(hash_combine(mix64(seed), element) ^ sample)) {}

    void begin_bounce(uint32_t bounce) {
        bounce_ = bounce;
        dim_ = 0;
    }

    // Uniform in [0, 1).
    double next() {
        const uint64_t key = (static_cast<uint64_t>(bounce_) << 32) | dim_++;
        const uint64_t bits = mix64(base_ ^ key);
        return static_cast<double>(bits >> 11) * 0x1.0p-53;
    }

private:
    uint64_t base_;
    uint32_t bounce_ = 0;
    uint32_t dim_ = 0;
};

}  // namespace renderproof
