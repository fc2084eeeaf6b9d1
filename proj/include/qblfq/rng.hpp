#pragma once

#include <cstdint>
#include <initializer_list>
#include <vector>

namespace qblfq {

// splitmix64 step; used both as a stream generator seed-expander and as the
// hash behind derive_seed().
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic seed derivation: every stochastic operation gets its own
// stream keyed by (run seed, iteration, group index, ...).
inline std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts) {
    std::uint64_t h = 0x6a09e667f3bcc908ULL;
    for (std::uint64_t p : parts) {
        h ^= p + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        std::uint64_t s = h;
        h = splitmix64(s);
    }
    return h;
}

// xoshiro256** — small, fast, reproducible across platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64(sm);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform in [0, 1)
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform in [lo, hi)
    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // Rademacher +-1
    int next_sign() { return (next_u64() >> 63) ? 1 : -1; }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t s_[4]{};
};

// One multinomial draw of `shots` samples from `probs` (need not be exactly
// normalized; negative dust is clamped). CDF inversion keeps the draw
// reproducible for a fixed stream.
std::vector<std::uint64_t> multinomial(const std::vector<double>& probs,
                                       std::uint64_t shots, Rng& rng);

}  // namespace qblfq
