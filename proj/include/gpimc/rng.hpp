#pragma once

// xoshiro256++ generator with splitmix64 seeding. Uniform doubles come from a
// 53-bit shift so streams are reproducible across platforms; per-chain streams
// are derived from (master seed, chain index) so ensemble results do not
// depend on how chains are distributed over workers.

#include <array>
#include <cstdint>

namespace gpimc {

struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
};

class Xoshiro256pp {
public:
    using State = std::array<std::uint64_t, 4>;

    explicit Xoshiro256pp(std::uint64_t seed) {
        SplitMix64 sm(seed);
        for (auto& w : s_) w = sm.next();
        ensure_nonzero();
    }

    // Stream for one chain of an ensemble. Distinct chain indices give
    // independent streams for any fixed master seed.
    static Xoshiro256pp for_chain(std::uint64_t master_seed, std::uint64_t chain_index) {
        return Xoshiro256pp(master_seed + 0x9E3779B97F4A7C15ULL * (chain_index + 1));
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform in [lo, hi).
    double uniform_range(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n); unbiased via rejection.
    std::uint64_t uniform_int(std::uint64_t n) {
        const std::uint64_t bound = n * (~std::uint64_t{0} / n);
        std::uint64_t x;
        do {
            x = next();
        } while (x >= bound);
        return x % n;
    }

    const State& state() const { return s_; }
    void set_state(const State& s) {
        s_ = s;
        ensure_nonzero();
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    void ensure_nonzero() {
        // all-zero state is the one fixed point of the transition
        if (s_[0] == 0 && s_[1] == 0 && s_[2] == 0 && s_[3] == 0) s_[0] = 1;
    }

    State s_{};
};

}  // namespace gpimc
