#pragma once

#include <bit>
#include <cstdint>

namespace mark0 {

// SplitMix64 (Vigna, public domain): used to expand seeds and to derive
// independent stream seeds from logical coordinates.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

  private:
    std::uint64_t state_;
};

// xoshiro256** (Blackman & Vigna), seeded through SplitMix64. One instance
// per simulation run; all randomness of a run flows from it in a fixed order.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) {
        SplitMix64 sm(seed);
        for (auto& w : s_) w = sm.next();
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

    // uniform in [0, 1), 53-bit resolution
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform in [lo, hi)
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t s_[4];
};

namespace detail {
inline std::uint64_t mix_word(std::uint64_t h, std::uint64_t w) {
    return SplitMix64(h ^ (w + 0x9e3779b97f4a7c15ull)).next();
}
}  // namespace detail

// Counter-style seed derivation: the resulting stream depends only on the
// logical coordinates (a, b, c), never on grid shape or execution order.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b,
                                 std::uint64_t c) {
    std::uint64_t h = detail::mix_word(base, a);
    h = detail::mix_word(h, b);
    h = detail::mix_word(h, c);
    return h;
}

inline std::uint64_t seed_word(double v) { return std::bit_cast<std::uint64_t>(v); }

}  // namespace mark0
