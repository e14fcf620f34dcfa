#pragma once

#include <cstdint>

namespace csmdpc {

/// Small deterministic generator (xorshift-style, seeded through splitmix64).
/// Output is platform-independent, which the reproducible-report contract
/// depends on; std::uniform_int_distribution is implementation-defined and
/// deliberately avoided.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t z = seed;
        for (auto& s : s_) {
            z += 0x9e3779b97f4a7c15ULL;
            std::uint64_t x = z;
            x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
            x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
            s = x ^ (x >> 31);
        }
    }

    std::uint64_t next() {
        // xoshiro256**
        std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform value in [0, bound) by rejection.
    std::uint64_t below(std::uint64_t bound) {
        std::uint64_t threshold = (0 - bound) % bound;
        while (true) {
            std::uint64_t v = next();
            if (v >= threshold) return v % bound;
        }
    }

    /// Independent stream for a sub-task; stable under scheduling.
    static Rng derive(std::uint64_t master_seed, std::uint64_t index) {
        return Rng(master_seed ^ (0x6a09e667f3bcc909ULL * (index + 1)));
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t s_[4];
};

}  // namespace csmdpc
