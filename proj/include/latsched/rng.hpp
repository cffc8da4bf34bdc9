// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>

namespace latsched {

/// SplitMix64 finalizer; used to derive independent substream seeds.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Deterministic random stream. The engine is std::mt19937_64, whose output
/// sequence is fixed by the C++ standard; all derived quantities are computed
/// here from raw 64-bit words so results do not depend on the standard
/// library's distribution implementations.
class SimRng {
  public:
    explicit SimRng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    /// Seed of a substream identified by (seed, a, b).
    static std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
        return mix64(mix64(mix64(seed) ^ a) ^ (b * 0xd1b54a32d192ed03ULL));
    }
    static SimRng derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
        return SimRng(derive_seed(seed, a, b));
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t next() { return engine_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    bool bernoulli(double p) { return uniform() < p; }
    bool fair_bit() { return (next() >> 63) != 0; }

    /// Unbiased integer in [0, n), n > 0.
    std::uint64_t uniform_index(std::uint64_t n) {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
        std::uint64_t x = next();
        while (x >= limit) x = next();
        return x % n;
    }

  private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

}  // namespace latsched
