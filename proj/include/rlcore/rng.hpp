#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace rlcore {

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}
inline std::uint64_t rotl64(std::uint64_t v, int k) {
    return (v << k) | (v >> (64 - k));
}
} // namespace detail

/// Seedable 64-bit generator (xoshiro256++ core, splitmix64 seeding).
/// The generator is self-contained so that a given seed produces the same
/// draw sequence on every platform this code compiles on; standard-library
/// distributions are implementation-defined and are deliberately not used.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = detail::splitmix64(sm);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = detail::rotl64(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = detail::rotl64(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1).
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform();
    }

    /// Uniform integer in [0, n). Rejection sampling, no modulo bias.
    int uniform_int(int n) {
        const std::uint64_t bound = static_cast<std::uint64_t>(n);
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t draw;
        do {
            draw = next_u64();
        } while (draw >= limit);
        return static_cast<int>(draw % bound);
    }

    /// Standard normal via Box-Muller; the second value of each pair is cached.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(1.0 - u1)); // 1-u1 in (0,1]
        const double a = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    /// Derive an independent stream from the current state and a stream id.
    /// Does not advance this generator.
    Rng split(std::uint64_t stream_id) const {
        std::uint64_t mix = state_[0] ^ detail::rotl64(state_[1], 17) ^ (stream_id * 0xd6e8feb86659fd93ULL);
        return Rng(detail::splitmix64(mix));
    }

private:
    std::array<std::uint64_t, 4> state_{};
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// Deterministic seed derivation for independent purposes (eval episodes,
/// per-run seeds inside sweeps). Pure function of its inputs.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index) {
    std::uint64_t x = base ^ detail::rotl64(stream + 0x632be59bd9b4e019ULL, 31);
    std::uint64_t a = detail::splitmix64(x);
    x ^= a + index;
    return detail::splitmix64(x);
}

} // namespace rlcore
