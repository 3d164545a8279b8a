#ifndef TENTLAB_REGION_HPP
#define TENTLAB_REGION_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "tentlab/space.hpp"

namespace tentlab {

using NodeIndex = std::size_t;
/// Sorted list of region nodes.
using NodeList = std::vector<NodeIndex>;
/// Point subset as a membership mask (1 = member).
using PointMask = std::vector<char>;

inline PointMask to_mask(std::size_t n, std::span<const PointIndex> set) {
  PointMask mask(n, 0);
  for (PointIndex i : set) mask.at(i) = 1;
  return mask;
}

inline std::vector<PointIndex> from_mask(const PointMask& mask) {
  std::vector<PointIndex> out;
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (mask[i]) out.push_back(i);
  return out;
}

/// Discrete time levels with dt/t quadrature weights.
class TimeGrid {
 public:
  /// L levels t_l = t_min (t_max / t_min)^(l / L), l = 0..L-1, all with weight log(t_max / t_min) / L.
  static TimeGrid log_uniform(double t_min, double t_max, std::size_t count) {
    if (!(t_min > 0.0) || !(t_max > t_min) || count == 0) throw Error("log_uniform time grid: need 0 < t_min < t_max");
    TimeGrid g;
    const double step = std::log(t_max / t_min) / static_cast<double>(count);
    for (std::size_t l = 0; l < count; ++l) {
      g.levels_.push_back(t_min * std::exp(step * static_cast<double>(l)));
      g.weights_.push_back(step);
    }
    return g;
  }

  /// Explicit increasing levels; w_l = log(t_{l+1} / t_l), the last weight repeats
  /// the previous ratio, and a single level gets weight 1.
  static TimeGrid from_levels(std::vector<double> levels) {
    if (levels.empty()) throw Error("time grid needs at least one level");
    for (std::size_t l = 0; l < levels.size(); ++l) {
      if (!(levels[l] > 0.0)) throw Error("time levels must be positive");
      if (l > 0 && !(levels[l] > levels[l - 1])) throw Error("time levels must be strictly increasing");
    }
    TimeGrid g;
    g.levels_ = std::move(levels);
    const std::size_t L = g.levels_.size();
    g.weights_.resize(L, 1.0);
    for (std::size_t l = 0; l + 1 < L; ++l) g.weights_[l] = std::log(g.levels_[l + 1] / g.levels_[l]);
    if (L > 1) g.weights_[L - 1] = g.weights_[L - 2];
    return g;
  }

  /// Default grid for a space: 32 log-uniform levels on [min(m) / 8, max(m)).
  static TimeGrid default_for(const DiscreteSpace& space, std::size_t count = 32) {
    const auto m = space.m();
    const auto [lo, hi] = std::minmax_element(m.begin(), m.end());
    return log_uniform(*lo / 8.0, *hi, count);
  }

  std::size_t size() const { return levels_.size(); }
  std::span<const double> levels() const { return levels_; }
  std::span<const double> log_weights() const { return weights_; }

 private:
  std::vector<double> levels_;
  std::vector<double> weights_;
};

/// Discretised admissible region: nodes (i, l) with t_l < m(y_i).
///
/// Nodes of one point are contiguous and ordered by level, so node (i, l) has
/// index offset(i) + l.  Keeps a pointer to the space; the space must outlive
/// the region.
class RegionGrid {
 public:
  RegionGrid(const DiscreteSpace& space, TimeGrid grid) : space_(&space), grid_(std::move(grid)) {
    const std::size_t n = space.size();
    const auto levels = grid_.levels();
    offsets_.assign(n + 1, 0);
    for (PointIndex i = 0; i < n; ++i) {
      const auto k = static_cast<std::size_t>(
          std::lower_bound(levels.begin(), levels.end(), space.m()[i]) - levels.begin());
      offsets_[i + 1] = offsets_[i] + k;
    }
    const std::size_t total = offsets_[n];
    point_.resize(total);
    level_.resize(total);
    weight_.resize(total);
    mass_.resize(total);
    for (PointIndex i = 0; i < n; ++i)
      for (std::size_t l = 0; l < levels_at(i); ++l) {
        const NodeIndex v = offsets_[i] + l;
        point_[v] = i;
        level_[v] = l;
        weight_[v] = space.gamma()[i] * grid_.log_weights()[l];
        mass_[v] = space.ball_mass({i, levels[l]});
      }
  }

  const DiscreteSpace& space() const { return *space_; }
  const TimeGrid& time_grid() const { return grid_; }

  std::size_t size() const { return point_.size(); }
  std::size_t levels_at(PointIndex i) const { return offsets_[i + 1] - offsets_[i]; }
  NodeIndex node(PointIndex i, std::size_t l) const { return offsets_[i] + l; }
  NodeIndex first_node(PointIndex i) const { return offsets_[i]; }

  PointIndex point(NodeIndex v) const { return point_[v]; }
  std::size_t level(NodeIndex v) const { return level_[v]; }
  double time(NodeIndex v) const { return grid_.levels()[level_[v]]; }
  /// gamma_i * w_l, the d gamma(y) dt/t quadrature weight.
  double weight(NodeIndex v) const { return weight_[v]; }
  /// gamma(B(y_i, t_l)).
  double ball_mass(NodeIndex v) const { return mass_[v]; }
  /// gamma(B(y_i, alpha t_l)).
  double ball_mass(NodeIndex v, double alpha) const { return space_->ball_mass({point_[v], alpha * time(v)}); }

  double max_time() const { return grid_.levels().back(); }

 private:
  const DiscreteSpace* space_;
  TimeGrid grid_;
  std::vector<std::size_t> offsets_;
  std::vector<PointIndex> point_;
  std::vector<std::size_t> level_;
  std::vector<double> weight_;
  std::vector<double> mass_;
};

inline RegionGrid build_region(const DiscreteSpace& space, TimeGrid grid) {
  RegionGrid region(space, std::move(grid));
  if (region.size() == 0) throw Error("admissible region is empty: every m(y) is below the first time level");
  return region;
}

/// Cone nodes {(i, l) : d(x, y_i) < alpha t_l}, sorted.
inline NodeList cone(const RegionGrid& region, PointIndex x, double alpha) {
  if (!(alpha > 0.0)) throw Error("cone: aperture must be positive");
  const auto& space = region.space();
  const auto levels = region.time_grid().levels();
  const double reach = alpha * region.max_time();
  NodeList out;
  auto nb = space.neighbors(x);
  auto ds = space.sorted_distances(x);
  for (std::size_t k = 0; k < nb.size() && ds[k] < reach; ++k) {
    const PointIndex y = nb[k];
    for (std::size_t l = region.levels_at(y); l-- > 0;) {
      if (!(ds[k] < alpha * levels[l])) break;
      out.push_back(region.node(y, l));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Visits every node of the aperture-alpha cone at x (unordered).
template <class Fn>
void for_each_cone_node(const RegionGrid& region, PointIndex x, double alpha, Fn&& fn) {
  const auto& space = region.space();
  const auto levels = region.time_grid().levels();
  const double reach = alpha * region.max_time();
  auto nb = space.neighbors(x);
  auto ds = space.sorted_distances(x);
  for (std::size_t k = 0; k < nb.size() && ds[k] < reach; ++k) {
    const PointIndex y = nb[k];
    for (std::size_t l = region.levels_at(y); l-- > 0;) {
      if (!(ds[k] < alpha * levels[l])) break;
      fn(region.node(y, l));
    }
  }
}

/// Distance from each point to the complement of the mask (infinity if the
/// complement is empty), capped: scans stop once `cap` is reached.
inline std::vector<double> distance_to_complement(const DiscreteSpace& space, const PointMask& inside,
                                                  double cap = std::numeric_limits<double>::infinity()) {
  std::vector<double> out(space.size(), std::numeric_limits<double>::infinity());
  for (PointIndex y = 0; y < space.size(); ++y) {
    if (!inside[y]) {
      out[y] = 0.0;
      continue;
    }
    auto nb = space.neighbors(y);
    auto ds = space.sorted_distances(y);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      if (ds[k] >= cap) {
        out[y] = cap;
        break;
      }
      if (!inside[nb[k]]) {
        out[y] = ds[k];
        break;
      }
    }
  }
  return out;
}

/// Tent membership mask: (y, t) lies in the aperture-1 cone of some z outside O
/// exactly when d(y, z) < t for such z, i.e. when dist(y, O^c) < t.
inline std::vector<char> tent_mask(const RegionGrid& region, const PointMask& open_set) {
  const auto delta = distance_to_complement(region.space(), open_set, region.max_time());
  std::vector<char> mask(region.size(), 0);
  for (PointIndex y = 0; y < region.space().size(); ++y)
    for (std::size_t l = 0; l < region.levels_at(y); ++l) {
      const NodeIndex v = region.node(y, l);
      mask[v] = !(delta[y] < region.time(v));
    }
  return mask;
}

/// T(O) = D minus the union of aperture-1 cones over the complement of O,
/// evaluated literally cone by cone.
inline NodeList tent(const RegionGrid& region, std::span<const PointIndex> open_set) {
  const auto& space = region.space();
  const PointMask inside = to_mask(space.size(), open_set);
  std::vector<char> covered(region.size(), 0);
  for (PointIndex z = 0; z < space.size(); ++z)
    if (!inside[z]) for_each_cone_node(region, z, 1.0, [&](NodeIndex v) { covered[v] = 1; });
  NodeList out;
  for (NodeIndex v = 0; v < region.size(); ++v)
    if (!covered[v]) out.push_back(v);
  return out;
}

/// Nodes whose open ball B(y, t) lies inside O, by explicit member scan.
inline NodeList tent_by_containment(const RegionGrid& region, std::span<const PointIndex> open_set) {
  const auto& space = region.space();
  const PointMask inside = to_mask(space.size(), open_set);
  NodeList out;
  for (NodeIndex v = 0; v < region.size(); ++v) {
    bool contained = true;
    for (PointIndex z : space.ball_span({region.point(v), region.time(v)}))
      if (!inside[z]) {
        contained = false;
        break;
      }
    if (contained) out.push_back(v);
  }
  return out;
}

inline NodeList mask_to_nodes(const std::vector<char>& mask) {
  NodeList out;
  for (NodeIndex v = 0; v < mask.size(); ++v)
    if (mask[v]) out.push_back(v);
  return out;
}

}  // namespace tentlab

#endif  // TENTLAB_REGION_HPP
