#ifndef CUBEKNOT_RNG_HPP
#define CUBEKNOT_RNG_HPP

#include <cstdint>
#include <string_view>

namespace cubeknot {

/// Small deterministic PRNG (splitmix64). All randomness in the library goes
/// through this so that a run is reproducible from a single recorded seed,
/// independent of the standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    /// Uniform integer in [lo, hi] inclusive.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    /// Derive an independent stream for a named subsystem from a master seed.
    static Rng stream(std::uint64_t master_seed, std::string_view name) {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (char c : name) {
            h ^= static_cast<unsigned char>(c);
            h *= 0x100000001b3ULL;
        }
        return Rng(master_seed ^ h);
    }

private:
    std::uint64_t state_;
};

} // namespace cubeknot

#endif
