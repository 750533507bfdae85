#pragma once

#include <cstdint>

namespace cfl {

// SplitMix64 step (Steele, Lea, Flood 2014). Used both as a bit mixer for
// deriving substream seeds and as the engine behind SplitMix64.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Derives a child seed from (seed, key). Feeding the result back in allows
// chaining: derive_seed(derive_seed(s, a), b) names the (a, b) substream.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t key) {
    return splitmix64(seed ^ splitmix64(key));
}

constexpr double u64_to_unit_double(std::uint64_t x) {
    return static_cast<double>(x >> 11) * 0x1.0p-53;
}

// Sequential counter-based generator. State advances by one splitmix step
// per draw; identical seeds give identical streams on every platform.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double next_double() { return u64_to_unit_double(next()); }

    // Uniform integer in [0, n), n >= 1. Lemire multiply-shift.
    std::uint64_t next_below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next()) * n) >> 64);
    }

    // Knuth's product-of-uniforms method; fine for the means used here
    // (well below the ~700 where exp(-mean) underflows).
    int poisson(double mean);

private:
    std::uint64_t state_;
};

}  // namespace cfl
