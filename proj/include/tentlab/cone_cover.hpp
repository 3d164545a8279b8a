#ifndef TENTLAB_CONE_COVER_HPP
#define TENTLAB_CONE_COVER_HPP

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "tentlab/atomic.hpp"
#include "tentlab/conditions.hpp"
#include "tentlab/dyadic.hpp"
#include "tentlab/functionals.hpp"
#include "tentlab/random.hpp"
#include "tentlab/region.hpp"
#include "tentlab/space.hpp"

namespace tentlab {

/// R(v, t) from an apex: union of open balls B(apex + s v, s/4), 0 <= s <= t.
struct SectorSpec {
  PointIndex apex = 0;
  std::vector<double> direction;
  double extent = 0.0;
};

namespace detail {

inline std::size_t require_dim(const DiscreteSpace& space, const char* who) {
  const auto dim = space.euclidean_dim();
  if (!dim) throw Error(std::string(who) + ": space has no Euclidean embedding");
  return *dim;
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t d = 0; d < a.size(); ++d) s += a[d] * b[d];
  return s;
}

inline std::vector<double> diff(std::span<const double> a, std::span<const double> b) {
  std::vector<double> out(a.size());
  for (std::size_t d = 0; d < a.size(); ++d) out[d] = a[d] - b[d];
  return out;
}

}  // namespace detail

/// Whether u = p - apex lies in R(v, t).  With b = <u, v> the condition
/// |u - s v| < s/4 reads g(s) = (15/16) s^2 - 2 b s + |u|^2 < 0, and g is
/// minimal over [0, t] at s* = clamp(16 b / 15, 0, t).
inline bool in_sector(std::span<const double> u, std::span<const double> v, double t) {
  const double b = detail::dot(u, v);
  const double uu = detail::dot(u, u);
  const double s = std::clamp(16.0 * b / 15.0, 0.0, t);
  return (15.0 / 16.0) * s * s - 2.0 * b * s + uu < 0.0;
}

inline std::vector<PointIndex> sector_members(const DiscreteSpace& space, const SectorSpec& spec) {
  const std::size_t dim = detail::require_dim(space, "sector_members");
  if (spec.direction.size() != dim) throw Error("sector_members: direction has the wrong dimension");
  if (std::abs(std::sqrt(detail::dot(spec.direction, spec.direction)) - 1.0) > 1e-12)
    throw Error("sector_members: direction must be a unit vector");
  if (!(spec.extent > 0.0)) throw Error("sector_members: extent must be positive");
  const auto x = space.coords(spec.apex);
  std::vector<PointIndex> out;
  for (PointIndex p = 0; p < space.size(); ++p)
    if (in_sector(detail::diff(space.coords(p), x), spec.direction, spec.extent)) out.push_back(p);
  return out;
}

/// Unit vectors such that every direction is within max_angle of one of them.
/// Dimension 1 gives {+1, -1}; dimension 2 gives ceil(pi / max_angle) equally
/// spaced angles.
inline std::vector<std::vector<double>> direction_net(std::size_t dim, double max_angle = std::atan(0.25)) {
  if (dim == 1) return {{1.0}, {-1.0}};
  if (dim != 2) throw Error("direction_net: only dimensions 1 and 2 are supported");
  if (!(max_angle > 0.0)) throw Error("direction_net: max_angle must be positive");
  const auto count = static_cast<std::size_t>(std::ceil(std::numbers::pi / max_angle));
  std::vector<std::vector<double>> out;
  for (std::size_t k = 0; k < count; ++k) {
    const double a = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(count);
    out.push_back({std::cos(a), std::sin(a)});
  }
  return out;
}

/// Parameters of the extension E* = E*_{alpha, lambda}.
struct LdaParams {
  double beta = 0.0;     // c_1
  double c_beta = 0.0;
  double c_2beta = 0.0;
  double alpha = 0.0;    // 2 beta c_{2 beta}
  double A_beta = 0.0;
  double lambda = 0.0;   // 0.5 / A_beta
  std::string assumption = "second case of the covering argument uses comparability at aperture 1 (beta = c_1)";
};

/// Max gamma(B(z, 16 r)) / gamma(B(z, r)) over (scale)-admissible balls B(z, r).
inline double expansion_constant(const DiscreteSpace& space, double scale) {
  double worst = 1.0;
  for (PointIndex z = 0; z < space.size(); ++z)
    for (double r : candidate_radii(space, z, scale * space.m()[z]))
      worst = std::max(worst, space.ball_mass({z, 16.0 * r}) / space.ball_mass({z, r}));
  return worst;
}

inline LdaParams lda_params(const DiscreteSpace& space) {
  LdaParams p;
  p.beta = verify_condition_C(space, 1.0).c_alpha;
  p.c_beta = verify_condition_C(space, p.beta).c_alpha;
  p.c_2beta = verify_condition_C(space, 2.0 * p.beta).c_alpha;
  p.alpha = 2.0 * p.beta * p.c_2beta;
  p.A_beta = expansion_constant(space, p.beta * p.c_beta / 4.0);
  p.lambda = 0.5 / p.A_beta;
  return p;
}

struct ExtensionResult {
  PointMask set;
  bool routes_agree = true;
  double mass = 0.0;
  double base_mass = 0.0;
  double measured_constant = 0.0;  // gamma(E*) lambda / gamma(E)
};

/// E* as the union of alpha-admissible balls with gamma(B n E) / gamma(B) > lambda.
inline PointMask extension_by_balls(const DiscreteSpace& space, const PointMask& E, double alpha, double lambda) {
  PointMask out(space.size(), 0);
  for (PointIndex c = 0; c < space.size(); ++c) {
    auto nb = space.neighbors(c);
    double inside = 0.0;
    std::size_t counted = 0;
    std::size_t marked = 0;
    for (double r : candidate_radii(space, c, alpha * space.m()[c])) {
      const std::size_t cnt = space.count_open(c, r);
      for (; counted < cnt; ++counted)
        if (E[nb[counted]]) inside += space.gamma()[nb[counted]];
      if (inside / space.prefix_mass(c, cnt) > lambda)
        for (; marked < cnt; ++marked) out[nb[marked]] = 1;
    }
  }
  return out;
}

/// Both routes (ball union, maximal superlevel set) with the agreement flag.
inline ExtensionResult extension(const DiscreteSpace& space, const PointMask& E, double alpha, double lambda) {
  ExtensionResult res;
  res.set = extension_by_balls(space, E, alpha, lambda);
  std::vector<double> indicator(space.size());
  for (PointIndex x = 0; x < space.size(); ++x) indicator[x] = E[x] ? 1.0 : 0.0;
  const auto maximal = local_maximal(space, indicator, alpha);
  for (PointIndex x = 0; x < space.size(); ++x) {
    if ((maximal[x] > lambda) != static_cast<bool>(res.set[x])) res.routes_agree = false;
    if (res.set[x]) res.mass += space.gamma()[x];
    if (E[x]) res.base_mass += space.gamma()[x];
  }
  if (res.base_mass > 0.0) res.measured_constant = res.mass * lambda / res.base_mass;
  return res;
}

inline ExtensionResult extension(const DiscreteSpace& space, const PointMask& E, const LdaParams& p) {
  return extension(space, E, p.alpha, p.lambda);
}

/// Smallest t > 0 with |p - x - t v| <= t/4, i.e. the smaller root of
/// (15/16) t^2 - 2 <v, u> t + |u|^2 = 0; empty when there is no real root.
inline std::optional<double> first_contact(std::span<const double> u, std::span<const double> v) {
  const double b = detail::dot(u, v);
  const double uu = detail::dot(u, u);
  if (!(b > 0.0)) return std::nullopt;
  const double disc = b * b - (15.0 / 16.0) * uu;
  if (disc < 0.0) return std::nullopt;
  return uu / (b + std::sqrt(disc));
}

struct ConeCoverCertificate {
  std::vector<std::optional<PointIndex>> x_m;   // per direction; empty when the sector never leaves E
  std::vector<double> t_m;                      // infinity when empty
  std::size_t cone_nodes = 0;
  std::size_t outside_tent = 0;                 // |Gamma(x) \ T(E*)|
  std::optional<NodeIndex> uncovered_witness;
  bool pass() const { return !uncovered_witness; }
  bool vacuous() const { return outside_tent == 0; }
};

/// Picks x_m per direction and checks Gamma(x) \ T(E*) inside the union of Gamma(x_m) node by node.
inline ConeCoverCertificate cone_cover(const RegionGrid& region, const PointMask& E, const PointMask& E_star,
                                       PointIndex x) {
  const auto& space = region.space();
  const std::size_t dim = detail::require_dim(space, "cone_cover");
  if (!E[x]) throw Error("cone_cover: x must lie in E");
  const auto net = direction_net(dim);
  const auto xc = space.coords(x);
  ConeCoverCertificate cert;
  for (const auto& v : net) {
    double best = std::numeric_limits<double>::infinity();
    std::optional<PointIndex> arg;
    for (PointIndex p = 0; p < space.size(); ++p) {
      if (E[p]) continue;
      const auto t = first_contact(detail::diff(space.coords(p), xc), v);
      if (t && *t < best) {
        best = *t;
        arg = p;
      }
    }
    cert.t_m.push_back(best);
    cert.x_m.push_back(arg);
  }
  const auto tmask = tent_mask(region, E_star);
  for_each_cone_node(region, x, 1.0, [&](NodeIndex v) {
    ++cert.cone_nodes;
    if (tmask[v]) return;
    ++cert.outside_tent;
    const PointIndex y = region.point(v);
    for (const auto& xm : cert.x_m)
      if (xm && space.distance(*xm, y) < region.time(v)) return;
    if (!cert.uncovered_witness || v < *cert.uncovered_witness) cert.uncovered_witness = v;
  });
  return cert;
}

struct CorollaryReport {
  double lambda = 0.0;
  double bound = 0.0;  // N lambda
  double worst_value = 0.0;
  PointIndex worst_x = 0;
  std::size_t level_set_size = 0;
  bool pass = true;
};

/// With E = {A_q f > lambda}: max_x A_q(f 1_{D \ T(E*)})(x) <= N lambda, N the net size.
template <class T>
CorollaryReport corollary_pointwise_check(const RegionGrid& region, const TentFunction<T>& f, double q, double lambda,
                                          const LdaParams& params, std::span<const double> a1) {
  const auto& space = region.space();
  CorollaryReport rep;
  rep.lambda = lambda;
  rep.bound = static_cast<double>(direction_net(detail::require_dim(space, "corollary_pointwise_check")).size()) * lambda;
  PointMask E(space.size(), 0);
  for (PointIndex x = 0; x < space.size(); ++x) {
    E[x] = a1[x] > lambda;
    rep.level_set_size += E[x];
  }
  const auto ext = extension(space, E, params);
  auto outside = tent_mask(region, ext.set);
  for (auto& b : outside) b = !b;
  const auto a = a_q_alpha(region, f.restricted(outside), q, 1.0);
  for (PointIndex x = 0; x < space.size(); ++x)
    if (a[x] > rep.worst_value) {
      rep.worst_value = a[x];
      rep.worst_x = x;
    }
  rep.pass = rep.worst_value <= rep.bound * (1.0 + 1e-12);
  return rep;
}

template <class T>
CorollaryReport corollary_pointwise_check(const RegionGrid& region, const TentFunction<T>& f, double q, double lambda,
                                          const LdaParams& params) {
  const auto a1 = a_q_alpha(region, f, q, 1.0);
  return corollary_pointwise_check(region, f, q, lambda, params, a1);
}

struct LdaCheckReport {
  std::size_t trials = 0;
  std::size_t nonempty = 0;   // trials whose sector contained a cloud point
  std::size_t violations = 0;
  std::optional<PointIndex> witness;
  bool pass() const { return violations == 0; }
};

/// Randomised check that y in R(v, t) inside E with t <= beta m(x) forces
/// B(y, 2t) inside E*.  E is the sector's cloud points plus random extra points.
inline LdaCheckReport lda_check(const DiscreteSpace& space, const LdaParams& params, std::size_t trials,
                                Rng& rng) {
  const std::size_t dim = detail::require_dim(space, "lda_check");
  LdaCheckReport rep;
  for (std::size_t k = 0; k < trials; ++k) {
    ++rep.trials;
    const PointIndex x = rng.index(space.size());
    std::vector<double> v(dim);
    if (dim == 1) {
      v[0] = rng.uniform() < 0.5 ? 1.0 : -1.0;
    } else {
      const double a = 2.0 * std::numbers::pi * rng.uniform();
      v[0] = std::cos(a);
      v[1] = std::sin(a);
      for (std::size_t d = 2; d < dim; ++d) v[d] = 0.0;
    }
    const double t = params.beta * space.m()[x] * (0.05 + 0.95 * rng.uniform());
    const auto sector = sector_members(space, {x, v, t});
    if (sector.empty()) continue;
    ++rep.nonempty;
    PointMask E = to_mask(space.size(), sector);
    const double extra = 0.3 * rng.uniform();
    for (PointIndex p = 0; p < space.size(); ++p)
      if (rng.uniform() < extra) E[p] = 1;
    const auto star = extension_by_balls(space, E, params.alpha, params.lambda);
    for (PointIndex y : sector) {
      bool ok = true;
      for (PointIndex z : space.ball_span({y, 2.0 * t}))
        if (!star[z]) ok = false;
      if (!ok) {
        ++rep.violations;
        if (!rep.witness) rep.witness = y;
        break;
      }
    }
  }
  return rep;
}

struct GeometryReport {
  std::size_t samples = 0;
  double worst_excess = 0.0;  // max (lhs - rhs) / rhs
  bool pass = true;
};

/// d(y, z) <= d(x, z) tan(theta) in the plane for the configurations where the
/// comparison triangle has its right angle at z (y - z orthogonal to z - x) and
/// where d(x, y) = d(x, z) with theta <= pi/4.
inline GeometryReport topcor_selftest(std::size_t samples, Rng& rng) {
  GeometryReport rep;
  auto record = [&](double lhs, double rhs) {
    ++rep.samples;
    const double excess = rhs > 0.0 ? (lhs - rhs) / rhs : lhs;
    rep.worst_excess = std::max(rep.worst_excess, excess);
    if (lhs > rhs * (1.0 + 1e-12) + 1e-300) rep.pass = false;
  };
  for (std::size_t s = 0; s < samples; ++s) {
    const double theta = 1e-3 + (std::numbers::pi / 4.0 - 2e-3) * rng.uniform();
    const double base = 2.0 * std::numbers::pi * rng.uniform();
    const double r = 0.1 + 10.0 * rng.uniform();
    const double x[2] = {rng.uniform(), rng.uniform()};
    const double z[2] = {x[0] + r * std::cos(base), x[1] + r * std::sin(base)};
    // Right angle at z: y = z + r tan(theta) * (unit normal on the theta side).
    const double h = r * std::tan(theta);
    const double y1[2] = {z[0] - h * std::sin(base), z[1] + h * std::cos(base)};
    const double dxz = std::hypot(z[0] - x[0], z[1] - x[1]);
    const double ang1 = std::atan2(y1[1] - x[1], y1[0] - x[0]) - base;
    record(std::hypot(y1[0] - z[0], y1[1] - z[1]), dxz * std::tan(std::abs(std::remainder(ang1, 2.0 * std::numbers::pi))));
    // Equal distances.
    const double y2[2] = {x[0] + r * std::cos(base + theta), x[1] + r * std::sin(base + theta)};
    record(std::hypot(y2[0] - z[0], y2[1] - z[1]), dxz * std::tan(theta));
  }
  return rep;
}

/// |rho_1(t) - rho_2(t)| = 2 t sin(theta / 2) <= t / 4 for rays at angle theta <= arctan(1/4).
inline GeometryReport divergence_selftest(std::size_t samples, Rng& rng) {
  GeometryReport rep;
  const double limit = std::atan(0.25);
  for (std::size_t s = 0; s < samples; ++s) {
    const double theta = limit * rng.uniform();
    const double base = 2.0 * std::numbers::pi * rng.uniform();
    const double t = 1e-3 + 100.0 * rng.uniform();
    const double dx = t * std::cos(base) - t * std::cos(base + theta);
    const double dy = t * std::sin(base) - t * std::sin(base + theta);
    const double lhs = std::hypot(dx, dy);
    const double rhs = t / 4.0;
    ++rep.samples;
    rep.worst_excess = std::max(rep.worst_excess, (lhs - rhs) / rhs);
    if (lhs > rhs * (1.0 + 1e-12)) rep.pass = false;
  }
  return rep;
}

}  // namespace tentlab

#endif  // TENTLAB_CONE_COVER_HPP
