#ifndef RLAB_RNG_HPP
#define RLAB_RNG_HPP

#include <cstdint>
#include <random>

namespace rlab {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

constexpr u64 splitmix64(u64 x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Independent stream seed for worker/point `index` under a master seed.
constexpr u64 derive_seed(u64 master, u64 index) {
    return splitmix64(splitmix64(master) ^ (index * 0xD1B54A32D192ED03ULL + 1));
}

// Deterministic RNG. mt19937_64 sequences are pinned by the standard; the
// double/bounded mappings below are ours, so results are identical across
// platforms and standard libraries.
class Rng {
public:
    explicit Rng(u64 seed) : eng_(splitmix64(seed)) {}

    u64 next_u64() { return eng_(); }

    // uniform in [0,1), 53 random bits
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // unbiased uniform in [0, n)
    u64 below(u64 n) {
        const u64 rem = (0 - n) % n; // 2^64 mod n
        for (;;) {
            const u64 v = next_u64();
            if (v >= rem) return v % n;
        }
    }

private:
    std::mt19937_64 eng_;
};

} // namespace rlab

#endif
