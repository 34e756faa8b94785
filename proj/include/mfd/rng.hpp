#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace mfd {

// All randomness in the artifact goes through this header. Nothing here
// depends on std:: engines or distributions, so identical seeds give
// identical streams on every platform and standard library.

inline constexpr uint64_t kGolden64 = 0x9e3779b97f4a7c15ULL;

// splitmix64 step: advances state and returns the next output.
inline uint64_t splitmix64_next(uint64_t& state) {
    uint64_t z = (state += kGolden64);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Derives an independent stream seed from (seed, stream index).
inline uint64_t mix64(uint64_t a, uint64_t b) {
    uint64_t s = a ^ (b + kGolden64);
    uint64_t r = splitmix64_next(s);
    return r ^ splitmix64_next(s);
}

// Stateless per-element uniform in [0, 1); order-independent, so parallel
// consumers see the same value for the same (seed, index).
inline double hash_unit(uint64_t seed, uint64_t index) {
    uint64_t s = mix64(seed, index);
    return static_cast<double>(s >> 11) * 0x1.0p-53;
}

// xoshiro256++ seeded through splitmix64.
class Rng {
public:
    explicit Rng(uint64_t seed) {
        for (auto& w : s_) w = splitmix64_next(seed);
    }

    uint64_t next() {
        const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Unbiased integer in [0, n); n must be nonzero.
    uint64_t below(uint64_t n) {
        unsigned __int128 m = static_cast<unsigned __int128>(next()) * n;
        auto lo = static_cast<uint64_t>(m);
        if (lo < n) {
            const uint64_t t = (0 - n) % n;
            while (lo < t) {
                m = static_cast<unsigned __int128>(next()) * n;
                lo = static_cast<uint64_t>(m);
            }
        }
        return static_cast<uint64_t>(m >> 64);
    }

    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return unit() < p; }

    // Fisher-Yates with this engine; the algorithm is spelled out so the
    // permutation never depends on std::shuffle internals.
    template <class T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[below(i)]);
        }
    }

private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    uint64_t s_[4];
};

} // namespace mfd
