#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace lpbm {

/// Counter-based deterministic random stream.
///
/// Every draw is a pure function of (seed, counter): draw k of stream s is
/// mix(s, k) no matter which thread asks for it or in what order, so Monte
/// Carlo loops can be chunked across threads and still reproduce bit-for-bit.
/// Substreams derive a fresh seed from (seed, id) and restart the counter,
/// giving independent streams for independent estimators.
///
/// The mixer is the splitmix64 finalizer over seed + golden-ratio-weighted
/// counter; ample quality for desk-scale geometry MC (it passes the harness's
/// own KS/chi-square gates).
class RngStream {
public:
    explicit RngStream(std::uint64_t seed, std::uint64_t counter = 0)
        : seed_(seed), counter_(counter) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t counter() const { return counter_; }
    void skip_to(std::uint64_t counter) { counter_ = counter; }

    /// Stream with a seed derived from (seed, id), counter reset to zero.
    RngStream substream(std::uint64_t id) const {
        return RngStream(mix(seed_ ^ 0x9e3779b97f4a7c15ull, id));
    }

    std::uint64_t next_u64() { return mix(seed_, counter_++); }

    /// Uniform on (0,1): 53 mantissa bits, never exactly 0 or 1.
    double next_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
    }

    /// Standard normal via Box-Muller (cosine branch). Consumes exactly two
    /// counter slots per call, so parallel chunking stays aligned.
    double next_normal() {
        double u1 = next_uniform();
        double u2 = next_uniform();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * std::numbers::pi * u2);
    }

    static std::uint64_t mix(std::uint64_t seed, std::uint64_t counter) {
        std::uint64_t z = seed + counter * 0x9e3779b97f4a7c15ull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t seed_;
    std::uint64_t counter_;
};

} // namespace lpbm
