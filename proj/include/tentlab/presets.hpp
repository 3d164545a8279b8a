#ifndef TENTLAB_PRESETS_HPP
#define TENTLAB_PRESETS_HPP

#include <cmath>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "tentlab/functionals.hpp"
#include "tentlab/random.hpp"
#include "tentlab/region.hpp"
#include "tentlab/space.hpp"

namespace tentlab {

/// A space together with the time grid it is normally discretised with.
/// Held by pointer so regions built on it stay valid when the preset moves.
struct NamedSpace {
  std::string name;
  std::shared_ptr<const DiscreteSpace> space;
  TimeGrid grid;

  RegionGrid region() const { return build_region(*space, grid); }
};

inline std::vector<std::vector<double>> line_grid(double lo, double hi, std::size_t count) {
  std::vector<std::vector<double>> pts;
  for (std::size_t i = 0; i < count; ++i)
    pts.push_back({lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1)});
  return pts;
}

/// 801 points on [-4, 4], mu = spacing, phi = log(2 pi)/2 + |x|^2/2, m = min(1, 1/|x|);
/// 32 log-uniform levels on [1e-3, 1).
inline NamedSpace gaussian_line() {
  const std::size_t n = 801;
  auto pts = line_grid(-4.0, 4.0, n);
  const double h = 8.0 / static_cast<double>(n - 1);
  auto space = build_space(pts, std::vector<double>(n, h),
                           DistanceFunctionPotential{{400}, 0.5 * std::log(2.0 * std::numbers::pi), 0.5},
                           DistanceBasedAdmissibility{});
  return {"gaussian_line", std::make_shared<const DiscreteSpace>(std::move(space)),
          TimeGrid::log_uniform(1e-3, 1.0, 32)};
}

/// 21 x 21 grid on [-3, 3]^2, mu = spacing^2, phi = log(2 pi) + |x|^2/2, m = min(1, 1/|x|);
/// 16 log-uniform levels on [min(m)/8, max(m)).
inline NamedSpace gaussian_plane() {
  const std::size_t side = 21;
  const double h = 6.0 / static_cast<double>(side - 1);
  std::vector<std::vector<double>> pts;
  for (std::size_t i = 0; i < side; ++i)
    for (std::size_t j = 0; j < side; ++j) pts.push_back({-3.0 + h * static_cast<double>(i), -3.0 + h * static_cast<double>(j)});
  auto space = build_space(pts, std::vector<double>(pts.size(), h * h),
                           DistanceFunctionPotential{{220}, std::log(2.0 * std::numbers::pi), 0.5},
                           DistanceBasedAdmissibility{});
  auto grid = TimeGrid::default_for(space, 16);
  return {"gaussian_plane", std::make_shared<const DiscreteSpace>(std::move(space)), std::move(grid)};
}

/// 400 points with spacing 1/40 on [0, 10), counting-free Lebesgue weights, phi = 0, m = 1.
inline NamedSpace uniform_local() {
  const std::size_t n = 400;
  const double h = 10.0 / static_cast<double>(n);
  std::vector<std::vector<double>> pts;
  for (std::size_t i = 0; i < n; ++i) pts.push_back({h * static_cast<double>(i)});
  auto space = build_space(pts, std::vector<double>(n, h), ExplicitPotential{std::vector<double>(n, 0.0)},
                           ConstantAdmissibility{1.0});
  auto grid = TimeGrid::default_for(space, 32);
  return {"uniform_local", std::make_shared<const DiscreteSpace>(std::move(space)), std::move(grid)};
}

/// 1-D polynomial potential with m = min(1, 1/|phi'|) on a uniform grid.
inline NamedSpace polynomial_line(std::string name, Polynomial phi, double lo, double hi, std::size_t count) {
  auto pts = line_grid(lo, hi, count);
  const double h = (hi - lo) / static_cast<double>(count - 1);
  auto space = build_space(pts, std::vector<double>(count, h), PolynomialPotential{std::move(phi)},
                           GradientBasedAdmissibility{});
  auto grid = TimeGrid::default_for(space, 32);
  return {std::move(name), std::make_shared<const DiscreteSpace>(std::move(space)), std::move(grid)};
}

/// phi(x) = log(2 pi)/2 + x^2/2 on [-4, 4].
inline NamedSpace gaussian_polynomial_line() {
  return polynomial_line("gaussian_polynomial", Polynomial({0.5 * std::log(2.0 * std::numbers::pi), 0.0, 0.5}), -4.0,
                         4.0, 801);
}

/// phi(x) = x^4 on [-2, 2].
inline NamedSpace quartic_line() {
  return polynomial_line("quartic", Polynomial({0.0, 0.0, 0.0, 0.0, 1.0}), -2.0, 2.0, 401);
}

inline NamedSpace preset_by_name(const std::string& name) {
  if (name == "gaussian_line") return gaussian_line();
  if (name == "gaussian_plane") return gaussian_plane();
  if (name == "uniform_local") return uniform_local();
  if (name == "gaussian_polynomial") return gaussian_polynomial_line();
  if (name == "quartic") return quartic_line();
  throw Error("unknown space preset '" + name + "'");
}

// ---------------------------------------------------------------------------
// Random inputs
// ---------------------------------------------------------------------------

/// Random 1-admissible ball B(c, r) with r in [0.2, 1] m(c).
inline Ball random_admissible_ball(const DiscreteSpace& space, Rng& rng, double alpha = 1.0) {
  const PointIndex c = rng.index(space.size());
  return {c, alpha * space.m()[c] * rng.uniform(0.2, 1.0)};
}

/// Single node with value 1.
inline TentFunction<double> point_mass(const RegionGrid& region, NodeIndex v, double amplitude = 1.0) {
  TentFunction<double> f(region.size());
  f.values.at(v) = amplitude;
  return f;
}

/// Indicator of T(B).
inline TentFunction<double> tent_indicator(const RegionGrid& region, const Ball& ball, double amplitude = 1.0) {
  const auto& space = region.space();
  PointMask inside(space.size(), 0);
  for (PointIndex z : space.ball_span(ball)) inside[z] = 1;
  const auto mask = tent_mask(region, inside);
  TentFunction<double> f(region.size());
  for (NodeIndex v = 0; v < region.size(); ++v)
    if (mask[v]) f.values[v] = amplitude;
  return f;
}

/// Corpus member: 1-4 point masses and 1-3 tent indicators of random 1-admissible
/// balls, all with log-normal amplitudes.
inline TentFunction<double> random_tent_function(const RegionGrid& region, Rng& rng) {
  TentFunction<double> f(region.size());
  const std::size_t masses = 1 + rng.index(4);
  for (std::size_t k = 0; k < masses; ++k) f.values[rng.index(region.size())] += rng.log_normal(1.0);
  const std::size_t tents = 1 + rng.index(3);
  for (std::size_t k = 0; k < tents; ++k) {
    const auto ind = tent_indicator(region, random_admissible_ball(region.space(), rng), rng.log_normal(1.0));
    for (NodeIndex v = 0; v < region.size(); ++v) f.values[v] += ind.values[v];
  }
  return f;
}

inline std::vector<TentFunction<double>> random_corpus(const RegionGrid& region, std::size_t count,
                                                       std::uint64_t seed) {
  Rng rng(seed);
  std::vector<TentFunction<double>> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) out.push_back(random_tent_function(region, rng));
  return out;
}

/// Dense signed test function with standard normal node values.
inline TentFunction<double> random_dense_function(const RegionGrid& region, Rng& rng) {
  TentFunction<double> g(region.size());
  for (auto& x : g.values) x = rng.normal();
  return g;
}

/// Point set: union of 1-3 random 1-admissible balls, or a Bernoulli subset.
inline PointMask random_open_set(const DiscreteSpace& space, Rng& rng) {
  PointMask E(space.size(), 0);
  if (rng.uniform() < 0.7) {
    const std::size_t balls = 1 + rng.index(3);
    for (std::size_t k = 0; k < balls; ++k)
      for (PointIndex z : space.ball_span(random_admissible_ball(space, rng))) E[z] = 1;
  } else {
    const double p = rng.uniform(0.05, 0.5);
    for (auto& e : E) e = rng.uniform() < p;
  }
  return E;
}

/// Nonnegative sparse data: log-normal spikes on a few points plus a random block.
inline std::vector<double> random_point_function(const DiscreteSpace& space, Rng& rng) {
  std::vector<double> u(space.size(), 0.0);
  const std::size_t spikes = 1 + rng.index(6);
  for (std::size_t k = 0; k < spikes; ++k) u[rng.index(space.size())] += rng.log_normal(1.0);
  const auto block = random_admissible_ball(space, rng);
  const double level = rng.log_normal(0.5);
  for (PointIndex z : space.ball_span(block)) u[z] += level;
  return u;
}

}  // namespace tentlab

#endif  // TENTLAB_PRESETS_HPP
