#pragma once

#include <array>
#include <cstdint>

namespace vvf {

/// One splitmix64 step. Advances `state` and returns the next output word.
inline std::uint64_t splitmix64(std::uint64_t& state) noexcept {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// xoshiro256++ with splitmix64 seed expansion.
///
/// Every random choice in this library flows through this generator from an
/// explicit seed, and the draw order of each caller is fixed, so identical
/// (seed, parameters) produce bit-identical results on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) noexcept {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64(sm);
    }

    /// Deterministic seed derivation for independent streams (Monte Carlo
    /// chains, parallel orbits): stream k uses
    /// splitmix64(master ^ (k+1) * 0xD1342543DE82EF95).
    static Rng derived(std::uint64_t master_seed, std::uint64_t stream) noexcept {
        std::uint64_t sm = master_seed ^ ((stream + 1) * 0xD1342543DE82EF95ULL);
        return Rng(splitmix64(sm));
    }

    std::uint64_t next_u64() noexcept {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform in [0,1): top 53 bits of one u64 draw scaled by 2^-53.
    double next_double() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform in {0,..,n-1}: multiply-high of one u64 draw by n.
    std::uint32_t next_index(std::uint32_t n) noexcept {
        return static_cast<std::uint32_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> state_;
};

}  // namespace vvf
