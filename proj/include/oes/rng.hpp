#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace oes {

// Deterministic RNG wrapper. The engine is std::mt19937_64 (bit-stable by
// the standard); the variate transforms are spelled out here because the
// std::*_distribution classes are implementation-defined and would break
// byte-identical reproducibility across standard libraries.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53-bit resolution.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Box-Muller, one variate per call; the sibling variate is discarded so
    // the stream position never depends on caller history.
    double normal(double mean, double stddev) {
        double u1 = uniform01();
        double u2 = uniform01();
        while (u1 <= 0.0) {
            u1 = uniform01();
        }
        double mag = std::sqrt(-2.0 * std::log(u1));
        return mean + stddev * mag * std::cos(2.0 * M_PI * u2);
    }

  private:
    std::mt19937_64 engine_;
};

}  // namespace oes
