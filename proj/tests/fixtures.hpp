#ifndef TENTLAB_TESTS_FIXTURES_HPP
#define TENTLAB_TESTS_FIXTURES_HPP

#include <cmath>
#include <numbers>

#include "tentlab/tentlab.hpp"

namespace fixtures {

using namespace tentlab;

// Presets are built once per test binary.
inline const NamedSpace& line() {
  static const NamedSpace s = gaussian_line();
  return s;
}
inline const RegionGrid& line_region() {
  static const RegionGrid r = line().region();
  return r;
}
inline const NamedSpace& plane() {
  static const NamedSpace s = gaussian_plane();
  return s;
}
inline const RegionGrid& plane_region() {
  static const RegionGrid r = plane().region();
  return r;
}
inline const NamedSpace& uniform() {
  static const NamedSpace s = uniform_local();
  return s;
}
inline const RegionGrid& uniform_region() {
  static const RegionGrid r = uniform().region();
  return r;
}

/// Small Gaussian line for brute-force oracles: 81 points on [-4, 4].
inline const NamedSpace& small_line() {
  static const NamedSpace s = [] {
    auto pts = line_grid(-4.0, 4.0, 81);
    auto space = build_space(pts, std::vector<double>(81, 0.1),
                             DistanceFunctionPotential{{40}, 0.5 * std::log(2.0 * std::numbers::pi), 0.5},
                             DistanceBasedAdmissibility{});
    return NamedSpace{"small_line", std::make_shared<const DiscreteSpace>(std::move(space)),
                      TimeGrid::log_uniform(0.05, 1.0, 12)};
  }();
  return s;
}
inline const RegionGrid& small_line_region() {
  static const RegionGrid r = small_line().region();
  return r;
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

}  // namespace fixtures

#endif  // TENTLAB_TESTS_FIXTURES_HPP
