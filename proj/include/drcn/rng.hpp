#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <initializer_list>

// Deterministic random number generation. Every random choice in the library
// (weight init, noise synthesis, shuffling, augmentation picks) flows through
// this generator so runs are reproducible from a single master seed.
//
// Algorithms (also documented in docs/formats.md):
//   - splitmix64 for seed expansion and stream derivation
//   - xoshiro256++ as the core generator
//   - uniform doubles in [0,1) via the top 53 bits
//   - standard normals via the Box-Muller transform (cosine/sine pair,
//     second value cached)

namespace drcn {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Derives a child seed from an ordered list of parts (master seed, stream
/// tag, epoch, item id, ...). Chained splitmix64 so distinct part lists give
/// independent streams.
inline std::uint64_t mix_seed(std::initializer_list<std::uint64_t> parts) {
    std::uint64_t state = 0x8f1bbcdcbfa53e0bULL;
    for (std::uint64_t p : parts) {
        state ^= splitmix64(state) ^ p;
        (void)splitmix64(state);
    }
    return splitmix64(state);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64(sm);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1), 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t uniform_index(std::uint64_t n) { return next_u64() % n; }

    /// Standard normal via Box-Muller. u1 is shifted into (0,1] so the log
    /// argument is never zero.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 6.283185307179586476925286766559 * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> state_{};
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Stream tags keeping independent random purposes apart when deriving child
// seeds from one master seed.
namespace stream {
inline constexpr std::uint64_t kWeights = 0x01;
inline constexpr std::uint64_t kShuffle = 0x02;
inline constexpr std::uint64_t kPatchNoise = 0x03;
inline constexpr std::uint64_t kAugment = 0x04;
inline constexpr std::uint64_t kValNoise = 0x05;
inline constexpr std::uint64_t kEvalNoise = 0x06;
inline constexpr std::uint64_t kCorpus = 0x07;
inline constexpr std::uint64_t kSplit = 0x08;
}  // namespace stream

}  // namespace drcn
