#pragma once

// Deterministic seeded randomness. All randomness in the library flows from
// one 64-bit seed through splitmix64 streams, so identical seeds give
// bit-identical runs regardless of standard-library distribution details.

#include "ymland/core.hpp"

#include <cstdint>

namespace ymland {

class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in (0, 1] (safe as a log argument).
    double next_double_open0() { return 1.0 - next_double(); }

    /// Standard normal via Box-Muller.
    double next_normal();

    /// Derives an independent child stream; tag picks the purpose.
    SplitMix64 split(std::uint64_t tag) const {
        SplitMix64 mix(state_ ^ (0x632be59bd9b4e019ULL * (tag + 1)));
        mix.next_u64();
        return mix;
    }

  private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Uniform on S^3 (also a Haar-uniform unit quaternion).
Vec4 random_unit4(SplitMix64& rng);

/// Uniform on the solid unit ball B^4.
Vec4 random_ball4(SplitMix64& rng);

/// Haar-uniform rotation in SO(3) (via a random unit quaternion).
Mat3 random_rotation(SplitMix64& rng);

}  // namespace ymland
