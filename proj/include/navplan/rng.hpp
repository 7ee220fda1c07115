#pragma once

#include <cstdint>
#include <cmath>
#include <random>

namespace navplan {

// Seeded RNG with hand-derived doubles so that sampled audits reproduce
// bit-identically regardless of the standard library's distribution
// implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  // Box-Muller without caching; two draws per call keeps the stream simple.
  double normal() {
    double u1 = 1.0 - uniform();  // (0, 1]
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  int uniform_int(int n) {
    int v = static_cast<int>(uniform() * n);
    return v < n ? v : n - 1;
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace navplan
