#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

namespace synbuild {

// splitmix64 step; stable across platforms and compilers.
inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline uint64_t hash_u64(uint64_t seed, uint64_t value) {
    uint64_t s = seed ^ (0x9e3779b97f4a7c15ULL + value);
    return splitmix64(s);
}

inline uint64_t hash_str(uint64_t seed, std::string_view name) {
    // FNV-1a over the name, folded into the seed via splitmix.
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : name) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return hash_u64(seed, h);
}

// Deterministic counter-based RNG with named sub-streams. Every stochastic
// choice in the pipeline draws from a stream keyed by (seed, name), so adding
// a new parameter never perturbs the draws of existing ones.
class Rng {
public:
    explicit Rng(uint64_t seed) : base_(seed), state_(seed) {}

    Rng stream(std::string_view name) const { return Rng(hash_str(base_, name)); }
    Rng stream(std::string_view name, uint64_t index) const {
        return Rng(hash_u64(hash_str(base_, name), index));
    }

    uint64_t seed() const { return base_; }

    uint64_t next_u64() { return splitmix64(state_); }

    // [0,1)
    double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // [0,n) without platform-dependent distributions
    uint64_t below(uint64_t n) {
        if (n == 0) return 0;
        return uint64_t((static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    // inclusive [lo,hi]
    int64_t range(int64_t lo, int64_t hi) {
        if (hi <= lo) return lo;
        return lo + int64_t(below(uint64_t(hi - lo + 1)));
    }

    bool bernoulli(double p) { return uniform() < p; }

    template <class T>
    const T& pick(const std::vector<T>& v) {
        return v[size_t(below(v.size()))];
    }

    // Fisher-Yates, deterministic.
    template <class T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = size_t(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    // standard normal via Box-Muller (polar-free variant, stable draws)
    double normal() {
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 1e-300) u1 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

private:
    uint64_t base_;
    uint64_t state_;
};

}  // namespace synbuild
