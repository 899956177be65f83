#pragma once

#include <cstdint>
#include <random>

namespace platebench {

// Stateless 64-bit mixer, used to derive independent per-purpose seeds so that
// e.g. pattern and parameter sampling never share RNG state.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(seed ^ splitmix64(stream));
}

// Deterministic uniform generator. std::mt19937_64 output is specified by the
// standard, and the [0,1) mapping below avoids std::uniform_real_distribution,
// whose draw sequence is implementation-defined. Results are therefore
// bit-identical across platforms and compilers.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // Uniform in [0, 1) with 53 random bits.
    double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

    // Uniform integer in [lo, hi], both inclusive.
    int uniform_int(int lo, int hi) {
        const int span = hi - lo + 1;
        int v = lo + static_cast<int>(unit() * span);
        return v > hi ? hi : v;
    }

    std::uint64_t raw() { return gen_(); }

private:
    std::mt19937_64 gen_;
};

}  // namespace platebench
