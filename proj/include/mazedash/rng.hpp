#pragma once

#include <cstdint>
#include <random>

namespace mazedash {

// Deterministic RNG. mt19937_64 output is pinned by the standard; the bounded
// draw below avoids std::uniform_int_distribution, whose mapping is
// implementation-defined, so streams reproduce across compilers.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next() { return gen_(); }

    // Uniform in [0, n). n must be >= 1.
    std::uint64_t below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next()) * n) >> 64);
    }

    int below_int(int n) { return static_cast<int>(below(static_cast<std::uint64_t>(n))); }

private:
    std::mt19937_64 gen_;
};

// Stable seed derivation (splitmix64 step), used for generator retries.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace mazedash
