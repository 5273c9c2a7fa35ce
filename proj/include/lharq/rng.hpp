#pragma once

#include <cstdint>
#include <random>

namespace lharq {

// Deterministic random stream. Every stochastic routine in the library takes
// one of these explicitly; there is no hidden global state. Uniform doubles
// are built from raw 64-bit draws with fixed bit arithmetic rather than
// through distribution objects, so a given seed reproduces the same sequence
// on any standard library.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    // Uniform draw in [0, 1), 53 significant bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    std::uint64_t raw() { return engine_(); }

    std::uint64_t seed() const noexcept { return seed_; }

    // Independent child stream; derivation depends only on (seed, stream),
    // not on how much of this stream has been consumed.
    Rng derive(std::uint64_t stream) const { return Rng(mix(seed_, stream)); }

    // splitmix64 finalizer.
    static std::uint64_t mix(std::uint64_t a, std::uint64_t b) noexcept {
        std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

  private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

}  // namespace lharq
