#ifndef TENTLAB_FUNCTIONALS_HPP
#define TENTLAB_FUNCTIONALS_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <span>
#include <type_traits>
#include <vector>

#include "tentlab/region.hpp"
#include "tentlab/space.hpp"

namespace tentlab {

template <class T>
inline constexpr bool is_complex_v = false;
template <class R>
inline constexpr bool is_complex_v<std::complex<R>> = true;

template <class T>
T conj_value(const T& v) {
  if constexpr (is_complex_v<T>)
    return std::conj(v);
  else
    return v;
}

/// Function on region nodes (dense; zero off its support).
template <class T = double>
struct TentFunction {
  std::vector<T> values;

  TentFunction() = default;
  explicit TentFunction(std::size_t nodes) : values(nodes, T{}) {}
  explicit TentFunction(std::vector<T> v) : values(std::move(v)) {}

  std::size_t size() const { return values.size(); }
  T& operator[](NodeIndex v) { return values[v]; }
  const T& operator[](NodeIndex v) const { return values[v]; }

  NodeList support() const {
    NodeList out;
    for (NodeIndex v = 0; v < values.size(); ++v)
      if (values[v] != T{}) out.push_back(v);
    return out;
  }
  bool is_zero() const {
    return std::all_of(values.begin(), values.end(), [](const T& x) { return x == T{}; });
  }

  /// f restricted to a node mask.
  TentFunction restricted(const std::vector<char>& mask) const {
    TentFunction out(values.size());
    for (NodeIndex v = 0; v < values.size(); ++v)
      if (mask[v]) out.values[v] = values[v];
    return out;
  }
};

/// A_q^alpha f at every point.
///
/// Each node (y, t) contributes |f|^q gamma_y w_t / gamma(B(y, t)) to every x
/// with d(x, y) < alpha t, which is the same incidence as (y, t) in Gamma_alpha(x).
template <class T>
std::vector<double> a_q_alpha(const RegionGrid& region, const TentFunction<T>& f, double q, double alpha) {
  if (!(q > 0.0) || !std::isfinite(q)) throw Error("a_q_alpha: q must lie in (0, inf)");
  if (!(alpha > 0.0)) throw Error("a_q_alpha: aperture must be positive");
  const auto& space = region.space();
  std::vector<double> acc(space.size(), 0.0);
  for (NodeIndex v = 0; v < region.size(); ++v) {
    const double mag = std::abs(f[v]);
    if (mag == 0.0) continue;
    const double contrib = std::pow(mag, q) * region.weight(v) / region.ball_mass(v);
    for (PointIndex x : space.ball_span({region.point(v), alpha * region.time(v)})) acc[x] += contrib;
  }
  for (double& a : acc) a = std::pow(a, 1.0 / q);
  return acc;
}

/// (sum_x u(x)^p gamma_x)^(1/p).
inline double lp_norm(const DiscreteSpace& space, std::span<const double> u, double p) {
  double s = 0.0;
  for (PointIndex x = 0; x < space.size(); ++x) s += std::pow(std::abs(u[x]), p) * space.gamma()[x];
  return std::pow(s, 1.0 / p);
}

template <class T>
double tpq_norm(const RegionGrid& region, const TentFunction<T>& f, double p, double q, double alpha) {
  if (!(p > 0.0) || !std::isfinite(p)) throw Error("tpq_norm: p must lie in (0, inf)");
  const auto a = a_q_alpha(region, f, q, alpha);
  return lp_norm(region.space(), a, p);
}

/// ||f||_{t^{q,q}_alpha}^q evaluated node-side:
/// sum |f|^q gamma_y w_t gamma(B(y, alpha t)) / gamma(B(y, t)).
template <class T>
double tqq_norm_power_nodewise(const RegionGrid& region, const TentFunction<T>& f, double q, double alpha) {
  double s = 0.0;
  for (NodeIndex v = 0; v < region.size(); ++v) {
    const double mag = std::abs(f[v]);
    if (mag == 0.0) continue;
    s += std::pow(mag, q) * region.weight(v) * region.ball_mass(v, alpha) / region.ball_mass(v);
  }
  return s;
}

/// <f, g> = sum f conj(g) gamma_y w_t.
template <class T>
T pairing(const RegionGrid& region, const TentFunction<T>& f, const TentFunction<T>& g) {
  T s{};
  for (NodeIndex v = 0; v < region.size(); ++v) s += f[v] * conj_value(g[v]) * region.weight(v);
  return s;
}

struct TinfResult {
  double value = 0.0;
  Ball argmax{};
  std::size_t balls = 0;
};

/// t^{inf,q'} norms of several functions: supremum over every distinct
/// level-admissible ball B of (gamma(B)^-1 sum_{T(B)} |g|^q' gamma w)^(1/q').
///
/// A node (y, t) lies in T(B(c, R)) iff every member of B(y, t) is within R of c,
/// i.e. iff reach_c(y, t) = max_{z in B(y,t)} d(c, z) < R.  Per center the reaches
/// are computed once and shared by all functions.  qprime = inf takes the
/// largest |g| over the tent instead.
template <class T>
std::vector<TinfResult> tinf_norms(const RegionGrid& region, std::span<const TentFunction<T>> gs, double qprime,
                                   double admissible_level = 5.0) {
  if (!(qprime >= 1.0)) throw Error("tinf_norm: q' must be >= 1");
  const auto& space = region.space();
  const bool sup_norm = std::isinf(qprime);
  std::vector<TinfResult> out(gs.size());
  std::vector<char> any_support(region.size(), 0);
  for (const auto& g : gs)
    for (NodeIndex v = 0; v < region.size(); ++v)
      if (g[v] != T{}) any_support[v] = 1;
  std::vector<std::size_t> top_level(space.size(), 0);  // 1 + highest supported level per point
  for (NodeIndex v = 0; v < region.size(); ++v)
    if (any_support[v]) top_level[region.point(v)] = region.level(v) + 1;

  std::vector<NodeIndex> nodes;
  std::vector<double> reach;
  std::vector<std::size_t> order;
  std::vector<double> acc;
  for (PointIndex c = 0; c < space.size(); ++c) {
    const double cap = admissible_level * space.m()[c];
    const auto radii = candidate_radii(space, c, cap);
    for (auto& r : out) r.balls += radii.size();
    nodes.clear();
    reach.clear();
    auto cn = space.neighbors(c);
    auto cd = space.sorted_distances(c);
    for (std::size_t k = 0; k < cn.size() && cd[k] < cap; ++k) {
      const PointIndex y = cn[k];
      if (top_level[y] == 0) continue;
      auto yn = space.neighbors(y);
      double running = 0.0;
      std::size_t pos = 0;
      for (std::size_t l = 0; l < top_level[y]; ++l) {
        const NodeIndex v = region.node(y, l);
        const std::size_t cnt = space.count_open(y, region.time(v));
        for (; pos < cnt; ++pos) running = std::max(running, space.distance(c, yn[pos]));
        if (running >= cap) break;
        if (any_support[v]) {
          nodes.push_back(v);
          reach.push_back(running);
        }
      }
    }
    order.resize(nodes.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return reach[a] < reach[b] || (reach[a] == reach[b] && nodes[a] < nodes[b]);
    });
    std::vector<double> sorted_reach(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) sorted_reach[i] = reach[order[i]];
    for (std::size_t gi = 0; gi < gs.size(); ++gi) {
      const auto& g = gs[gi];
      acc.assign(order.size() + 1, 0.0);
      for (std::size_t i = 0; i < order.size(); ++i) {
        const NodeIndex v = nodes[order[i]];
        const double mag = std::abs(g[v]);
        acc[i + 1] = sup_norm ? std::max(acc[i], mag) : acc[i] + std::pow(mag, qprime) * region.weight(v);
      }
      for (double R : radii) {
        const auto cnt = static_cast<std::size_t>(
            std::lower_bound(sorted_reach.begin(), sorted_reach.end(), R) - sorted_reach.begin());
        const double val = sup_norm ? acc[cnt] : std::pow(acc[cnt] / space.ball_mass({c, R}), 1.0 / qprime);
        if (val > out[gi].value) {
          out[gi].value = val;
          out[gi].argmax = {c, R};
        }
      }
    }
  }
  return out;
}

template <class T>
TinfResult tinf_norm(const RegionGrid& region, const TentFunction<T>& g, double qprime,
                     double admissible_level = 5.0) {
  return tinf_norms<T>(region, std::span<const TentFunction<T>>(&g, 1), qprime, admissible_level).front();
}

/// Brute-force t^{inf,q'} value for one ball: tent by explicit containment.
template <class T>
double tinf_ball_value(const RegionGrid& region, const TentFunction<T>& g, double qprime, const Ball& ball) {
  const auto& space = region.space();
  const PointMask inside = to_mask(space.size(), space.ball_span(ball));
  double s = 0.0;
  for (NodeIndex v = 0; v < region.size(); ++v) {
    if (g[v] == T{}) continue;
    bool contained = true;
    for (PointIndex z : space.ball_span({region.point(v), region.time(v)}))
      if (!inside[z]) {
        contained = false;
        break;
      }
    if (!contained) continue;
    const double mag = std::abs(g[v]);
    s = std::isinf(qprime) ? std::max(s, mag) : s + std::pow(mag, qprime) * region.weight(v);
  }
  return std::isinf(qprime) ? s : std::pow(s / space.ball_mass(ball), 1.0 / qprime);
}

/// Function of (x; y, t) stored on the incidences d(x, y) < alpha t.
///
/// For node v = (y, t) the entries are the members of B(y, alpha t) in y's
/// neighbour order; entry k belongs to x = neighbors(y)[k].
template <class T = double>
class CylindricalField {
 public:
  CylindricalField(const RegionGrid& region, double alpha) : region_(&region), alpha_(alpha) {
    if (!(alpha > 0.0)) throw Error("cylindrical field: aperture must be positive");
    offsets_.resize(region.size() + 1, 0);
    for (NodeIndex v = 0; v < region.size(); ++v)
      offsets_[v + 1] = offsets_[v] + region.space().count_open(region.point(v), alpha * region.time(v));
    values_.assign(offsets_.back(), T{});
  }

  double aperture() const { return alpha_; }
  const RegionGrid& region() const { return *region_; }
  std::size_t entries(NodeIndex v) const { return offsets_[v + 1] - offsets_[v]; }
  std::span<T> row(NodeIndex v) { return {values_.data() + offsets_[v], entries(v)}; }
  std::span<const T> row(NodeIndex v) const { return {values_.data() + offsets_[v], entries(v)}; }
  /// Point that entry k of node v refers to.
  PointIndex entry_point(NodeIndex v, std::size_t k) const {
    return region_->space().neighbors(region_->point(v))[k];
  }
  std::size_t total_entries() const { return values_.size(); }

 private:
  const RegionGrid* region_;
  double alpha_;
  std::vector<std::size_t> offsets_;
  std::vector<T> values_;
};

/// J_alpha f(x; y, t) = 1_{Gamma_alpha(x)}(y, t) f(y, t).
template <class T>
CylindricalField<T> j_alpha(const RegionGrid& region, const TentFunction<T>& f, double alpha) {
  CylindricalField<T> out(region, alpha);
  for (NodeIndex v = 0; v < region.size(); ++v) {
    auto r = out.row(v);
    std::fill(r.begin(), r.end(), f[v]);
  }
  return out;
}

/// N_alpha U(x; y, t) = 1_{B(y, alpha t)}(x) * gamma-average of U(.; y, t) over B(y, alpha t).
template <class T>
CylindricalField<T> n_alpha(const CylindricalField<T>& U, double alpha) {
  const auto& region = U.region();
  const auto& space = region.space();
  CylindricalField<T> out(region, alpha);
  for (NodeIndex v = 0; v < region.size(); ++v) {
    const PointIndex y = region.point(v);
    const std::size_t inner = std::min(U.entries(v), out.entries(v));
    auto nb = space.neighbors(y);
    auto src = U.row(v);
    T s{};
    for (std::size_t k = 0; k < inner; ++k) s += src[k] * space.gamma()[nb[k]];
    const T avg = s / space.prefix_mass(y, out.entries(v));
    auto dst = out.row(v);
    std::fill(dst.begin(), dst.end(), avg);
  }
  return out;
}

/// Norm of L^p(gamma; L^q(D)), with L^q(D) carrying d gamma(y) dt / (t gamma(B(y, t))).
template <class T>
double mixed_norm(const CylindricalField<T>& U, double p, double q) {
  const auto& region = U.region();
  const auto& space = region.space();
  std::vector<double> acc(space.size(), 0.0);
  for (NodeIndex v = 0; v < region.size(); ++v) {
    const double w = region.weight(v) / region.ball_mass(v);
    auto row = U.row(v);
    auto nb = space.neighbors(region.point(v));
    for (std::size_t k = 0; k < row.size(); ++k) {
      const double mag = std::abs(row[k]);
      if (mag != 0.0) acc[nb[k]] += std::pow(mag, q) * w;
    }
  }
  double s = 0.0;
  for (PointIndex x = 0; x < space.size(); ++x) s += std::pow(std::pow(acc[x], 1.0 / q), p) * space.gamma()[x];
  return std::pow(s, 1.0 / p);
}

}  // namespace tentlab

#endif  // TENTLAB_FUNCTIONALS_HPP
