#pragma once
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace cbsim {

// Counter-based splittable generator. A stream is keyed by a master seed plus
// a path of integers (trial, agent, arm); equal keys replay the exact same
// sequence, distinct paths give statistically independent sequences. This is
// what lets the collaborative reduction consume the same per-arm reward
// stream as the underlying batched run.
namespace detail {
inline std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}
inline constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
} // namespace detail

class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::initializer_list<std::uint64_t> path)
        : state_(derive_key(master_seed, path.begin(), path.end())) {}

    RngStream(std::uint64_t master_seed, const std::vector<std::uint64_t>& path)
        : state_(derive_key(master_seed, path.begin(), path.end())) {}

    std::uint64_t next_u64() {
        state_ += detail::kGamma;
        return detail::mix64(state_);
    }

    // Uniform in [0, 1), 53-bit resolution.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    bool next_bernoulli(double p) { return next_double() < p; }

    // Uniform in [0, n). n = 2 in practice; modulo bias is negligible at 64 bits.
    std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

private:
    template <class It>
    static std::uint64_t derive_key(std::uint64_t seed, It first, It last) {
        std::uint64_t k = detail::mix64(seed ^ 0xA24BAED4963EE407ULL);
        for (It it = first; it != last; ++it)
            k = detail::mix64(k ^ detail::mix64(*it + detail::kGamma));
        return k;
    }

    std::uint64_t state_;
};

// Identifies one logical actor's reward source: (master_seed, trial, agent).
// Per-arm streams hang off it so that replaying the same arm in a different
// execution order still sees the same reward sequence.
struct StreamKey {
    std::uint64_t master_seed = 0;
    std::uint64_t trial = 0;
    std::uint64_t agent = 0;

    RngStream arm_stream(std::uint64_t arm) const {
        return RngStream(master_seed, {trial, agent, arm});
    }
    // For non-reward randomness (e.g. uniform arm choice); tag keeps it
    // disjoint from arm streams.
    RngStream aux_stream(std::uint64_t tag) const {
        return RngStream(master_seed, {trial, agent, 0xFFFF0000ULL + tag});
    }
};

} // namespace cbsim
