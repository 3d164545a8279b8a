#ifndef TENTLAB_RANDOM_HPP
#define TENTLAB_RANDOM_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace tentlab {

/// Seeded generator whose derived draws do not depend on the standard library's
/// distribution implementations (mt19937_64 raw output is fully specified).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t bits() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform on {0, ..., n - 1}.
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n; }
  /// Standard normal (Box-Muller, one draw per call).
  double normal() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }
  double log_normal(double sigma) { return std::exp(sigma * normal()); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace tentlab

#endif  // TENTLAB_RANDOM_HPP
