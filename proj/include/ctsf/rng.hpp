// Counter-based deterministic random generator (SplitMix64 finalizer over a
// keyed counter). Streams keyed by (seed, realization index) make every draw
// independent of evaluation order, so Monte-Carlo batches are bit-identical
// across runs and across any parallel schedule.

#pragma once

#include <cmath>
#include <cstdint>

namespace ctsf {

class Rng {
  public:
    static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

    static std::uint64_t mix(std::uint64_t z) {
        z += kGolden;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    static Rng keyed(std::uint64_t seed, std::uint64_t stream) {
        Rng r;
        r.key_ = mix(mix(seed) ^ (kGolden * (stream + 1)));
        return r;
    }

    std::uint64_t next_u64() { return mix(key_ + kGolden * ++ctr_); }

    // Uniform in [0, 1), 53-bit resolution.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Standard normal via Box-Muller (cosine branch only; two uniforms per
    // draw keeps the consumption pattern trivially reproducible).
    double next_normal() {
        const double u1 = 1.0 - next_unit();  // (0, 1], keeps the log finite
        const double u2 = next_unit();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * 3.141592653589793238462643383279502884 * u2);
    }

  private:
    std::uint64_t key_ = 0;
    std::uint64_t ctr_ = 0;
};

}  // namespace ctsf
