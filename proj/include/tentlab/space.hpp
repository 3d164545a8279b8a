#ifndef TENTLAB_SPACE_HPP
#define TENTLAB_SPACE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace tentlab {

using PointIndex = std::size_t;

/// Raised for invalid inputs (non-positive weights, malformed specs, ...).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense polynomial with ascending coefficients: c0 + c1 x + c2 x^2 + ...
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> coefficients) : coeffs_(std::move(coefficients)) {}

  double operator()(double x) const {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  Polynomial derivative() const {
    if (coeffs_.size() <= 1) return Polynomial({0.0});
    std::vector<double> d(coeffs_.size() - 1);
    for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = static_cast<double>(k) * coeffs_[k];
    return Polynomial(std::move(d));
  }

  const std::vector<double>& coefficients() const { return coeffs_; }

 private:
  std::vector<double> coeffs_;
};

// Potential variants.  The distance-function variant is a + a' dist(x, origins)^2.
struct DistanceFunctionPotential {
  std::vector<PointIndex> origins;
  double a = 0.0;
  double a_prime = 0.5;
};
struct ExplicitPotential {
  std::vector<double> values;
};
struct PolynomialPotential {
  Polynomial poly;
};
using PotentialSpec = std::variant<DistanceFunctionPotential, ExplicitPotential, PolynomialPotential>;

// Admissibility variants.
struct DistanceBasedAdmissibility {};
struct GradientBasedAdmissibility {};
struct ConstantAdmissibility {
  double value = 1.0;
};
struct ExplicitAdmissibility {
  std::vector<double> values;
};
using AdmissibilitySpec = std::variant<DistanceBasedAdmissibility, GradientBasedAdmissibility,
                                       ConstantAdmissibility, ExplicitAdmissibility>;

/// Open ball {x : d(center, x) < radius}.
struct Ball {
  PointIndex center = 0;
  double radius = 0.0;

  Ball scaled(double factor) const { return {center, radius * factor}; }
  friend bool operator==(const Ball&, const Ball&) = default;
};

/// Finite weighted metric measure space with a cached neighbour index.
///
/// For every center c the points are kept sorted by (d(c, .), index) together
/// with prefix sums of gamma in that order, so open-ball membership and
/// gamma(B(c, r)) are a binary search away.  The data is immutable after
/// construction.
class DiscreteSpace {
 public:
  DiscreteSpace(std::vector<double> distances, std::size_t n, std::vector<double> coords,
                std::optional<std::size_t> euclidean_dim, std::vector<double> mu, std::vector<double> phi,
                std::vector<double> m, PotentialSpec potential)
      : n_(n),
        dist_(std::move(distances)),
        coords_(std::move(coords)),
        dim_(euclidean_dim),
        mu_(std::move(mu)),
        phi_(std::move(phi)),
        m_(std::move(m)),
        potential_(std::move(potential)) {
    gamma_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) gamma_[i] = mu_[i] * std::exp(-phi_[i]);
    build_index();
  }

  std::size_t size() const { return n_; }
  std::optional<std::size_t> euclidean_dim() const { return dim_; }

  std::span<const double> coords(PointIndex i) const {
    if (!dim_) throw Error("space has no Euclidean embedding");
    return {coords_.data() + i * *dim_, *dim_};
  }

  double distance(PointIndex i, PointIndex j) const { return dist_[i * n_ + j]; }

  std::span<const double> mu() const { return mu_; }
  std::span<const double> phi() const { return phi_; }
  std::span<const double> gamma() const { return gamma_; }
  std::span<const double> m() const { return m_; }
  const PotentialSpec& potential() const { return potential_; }

  /// Points sorted by distance from c (c first).
  std::span<const PointIndex> neighbors(PointIndex c) const { return {order_.data() + c * n_, n_}; }
  std::span<const double> sorted_distances(PointIndex c) const { return {sorted_.data() + c * n_, n_}; }

  /// Number of points with d(c, .) < r.
  std::size_t count_open(PointIndex c, double r) const {
    auto d = sorted_distances(c);
    return static_cast<std::size_t>(std::lower_bound(d.begin(), d.end(), r) - d.begin());
  }
  /// Number of points with d(c, .) <= r.
  std::size_t count_closed(PointIndex c, double r) const {
    auto d = sorted_distances(c);
    return static_cast<std::size_t>(std::upper_bound(d.begin(), d.end(), r) - d.begin());
  }

  /// gamma mass of the first k points in c's neighbour order.
  double prefix_mass(PointIndex c, std::size_t k) const { return prefix_gamma_[c * (n_ + 1) + k]; }

  double ball_mass(const Ball& b) const { return prefix_mass(b.center, count_open(b.center, b.radius)); }

  std::span<const PointIndex> ball_span(const Ball& b) const {
    return neighbors(b.center).first(count_open(b.center, b.radius));
  }

  double diameter() const { return *std::max_element(dist_.begin(), dist_.end()); }

  double min_spacing() const {
    double s = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < n_; ++c)
      if (n_ > 1) s = std::min(s, sorted_distances(c)[1]);
    return s;
  }

 private:
  void build_index() {
    order_.resize(n_ * n_);
    sorted_.resize(n_ * n_);
    prefix_gamma_.resize(n_ * (n_ + 1));
    std::vector<PointIndex> idx(n_);
    for (std::size_t c = 0; c < n_; ++c) {
      std::iota(idx.begin(), idx.end(), PointIndex{0});
      const double* row = dist_.data() + c * n_;
      std::sort(idx.begin(), idx.end(), [row](PointIndex a, PointIndex b) {
        return row[a] < row[b] || (row[a] == row[b] && a < b);
      });
      double acc = 0.0;
      prefix_gamma_[c * (n_ + 1)] = 0.0;
      for (std::size_t k = 0; k < n_; ++k) {
        order_[c * n_ + k] = idx[k];
        sorted_[c * n_ + k] = row[idx[k]];
        acc += gamma_[idx[k]];
        prefix_gamma_[c * (n_ + 1) + k + 1] = acc;
      }
    }
  }

  std::size_t n_;
  std::vector<double> dist_;
  std::vector<double> coords_;
  std::optional<std::size_t> dim_;
  std::vector<double> mu_, phi_, gamma_, m_;
  PotentialSpec potential_;
  std::vector<PointIndex> order_;
  std::vector<double> sorted_;
  std::vector<double> prefix_gamma_;
};

namespace detail {

inline std::vector<double> euclidean_distances(const std::vector<std::vector<double>>& points, std::size_t dim) {
  const std::size_t n = points.size();
  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < dim; ++k) {
        const double diff = points[i][k] - points[j][k];
        s += diff * diff;
      }
      d[i * n + j] = d[j * n + i] = std::sqrt(s);
    }
  return d;
}

inline double dist_to_set(const std::vector<double>& dist, std::size_t n, PointIndex i,
                          const std::vector<PointIndex>& set) {
  double best = std::numeric_limits<double>::infinity();
  for (PointIndex o : set) best = std::min(best, dist[i * n + o]);
  return best;
}

// Gradient of an explicit potential sampled on an axis-aligned grid: per axis,
// nearest neighbours that agree on all other coordinates; central differences
// in the interior, one-sided at the extremes.
inline std::vector<double> grid_gradient_norm(const std::vector<std::vector<double>>& pts,
                                              std::span<const double> phi, std::size_t dim) {
  const std::size_t n = pts.size();
  constexpr double tol = 1e-9;
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double norm2 = 0.0;
    for (std::size_t axis = 0; axis < dim; ++axis) {
      std::optional<std::size_t> lo, hi;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        bool aligned = true;
        for (std::size_t k = 0; k < dim && aligned; ++k)
          if (k != axis && std::abs(pts[j][k] - pts[i][k]) > tol) aligned = false;
        if (!aligned) continue;
        const double delta = pts[j][axis] - pts[i][axis];
        if (delta < 0 && (!lo || delta > pts[*lo][axis] - pts[i][axis])) lo = j;
        if (delta > 0 && (!hi || delta < pts[*hi][axis] - pts[i][axis])) hi = j;
      }
      double g = 0.0;
      if (lo && hi)
        g = (phi[*hi] - phi[*lo]) / (pts[*hi][axis] - pts[*lo][axis]);
      else if (hi)
        g = (phi[*hi] - phi[i]) / (pts[*hi][axis] - pts[i][axis]);
      else if (lo)
        g = (phi[i] - phi[*lo]) / (pts[i][axis] - pts[*lo][axis]);
      norm2 += g * g;
    }
    out[i] = std::sqrt(norm2);
  }
  return out;
}

inline std::vector<double> resolve_potential(const PotentialSpec& spec, const std::vector<double>& dist,
                                             std::size_t n, const std::vector<std::vector<double>>* pts,
                                             std::optional<std::size_t> dim) {
  std::vector<double> phi(n);
  std::visit(
      [&](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, DistanceFunctionPotential>) {
          if (p.origins.empty()) throw Error("distance_function potential: empty origin set");
          for (PointIndex o : p.origins)
            if (o >= n) throw Error("distance_function potential: origin index " + std::to_string(o) + " out of range");
          for (std::size_t i = 0; i < n; ++i) {
            const double r = dist_to_set(dist, n, i, p.origins);
            phi[i] = p.a + p.a_prime * r * r;
          }
        } else if constexpr (std::is_same_v<P, ExplicitPotential>) {
          if (p.values.size() != n) throw Error("explicit potential: expected " + std::to_string(n) + " values");
          phi = p.values;
        } else {
          if (!pts || dim != std::size_t{1}) throw Error("polynomial_1d potential requires 1-D points");
          for (std::size_t i = 0; i < n; ++i) phi[i] = p.poly((*pts)[i][0]);
        }
      },
      spec);
  for (std::size_t i = 0; i < n; ++i)
    if (!std::isfinite(phi[i])) throw Error("potential is not finite at index " + std::to_string(i));
  return phi;
}

inline std::vector<double> resolve_admissibility(const AdmissibilitySpec& spec, const PotentialSpec& potential,
                                                 std::span<const double> phi, const std::vector<double>& dist,
                                                 std::size_t n, const std::vector<std::vector<double>>* pts,
                                                 std::optional<std::size_t> dim) {
  std::vector<double> m(n);
  auto from_gradient = [&](double g) { return g == 0.0 ? 1.0 : std::min(1.0, 1.0 / g); };
  std::visit(
      [&](const auto& a) {
        using A = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<A, DistanceBasedAdmissibility>) {
          const auto* df = std::get_if<DistanceFunctionPotential>(&potential);
          if (!df) throw Error("distance_based admissibility requires a distance_function potential");
          if (df->origins.empty()) throw Error("distance_based admissibility: empty origin set");
          for (std::size_t i = 0; i < n; ++i) {
            const double r = dist_to_set(dist, n, i, df->origins);
            m[i] = r == 0.0 ? 1.0 : std::min(1.0, 1.0 / r);
          }
        } else if constexpr (std::is_same_v<A, GradientBasedAdmissibility>) {
          if (const auto* pp = std::get_if<PolynomialPotential>(&potential)) {
            if (!pts || dim != std::size_t{1}) throw Error("gradient_based admissibility: polynomial needs 1-D points");
            const Polynomial d = pp->poly.derivative();
            for (std::size_t i = 0; i < n; ++i) m[i] = from_gradient(std::abs(d((*pts)[i][0])));
          } else if (std::holds_alternative<ExplicitPotential>(potential)) {
            if (!pts || !dim) throw Error("gradient_based admissibility: explicit potential needs embedded points");
            const auto g = grid_gradient_norm(*pts, phi, *dim);
            for (std::size_t i = 0; i < n; ++i) m[i] = from_gradient(g[i]);
          } else {
            throw Error("gradient_based admissibility requires a polynomial_1d or explicit potential");
          }
        } else if constexpr (std::is_same_v<A, ConstantAdmissibility>) {
          std::fill(m.begin(), m.end(), a.value);
        } else {
          if (a.values.size() != n) throw Error("explicit admissibility: expected " + std::to_string(n) + " values");
          m = a.values;
        }
      },
      spec);
  for (std::size_t i = 0; i < n; ++i)
    if (!(m[i] > 0.0) || !std::isfinite(m[i]))
      throw Error("admissibility value must be positive and finite at index " + std::to_string(i));
  return m;
}

inline void check_weights(const std::vector<double>& mu, std::size_t n) {
  if (mu.size() != n) throw Error("expected " + std::to_string(n) + " base weights, got " + std::to_string(mu.size()));
  for (std::size_t i = 0; i < n; ++i)
    if (!(mu[i] > 0.0) || !std::isfinite(mu[i]))
      throw Error("non-positive base weight at index " + std::to_string(i));
}

}  // namespace detail

/// Builds a space from Euclidean coordinates.
inline DiscreteSpace build_space(const std::vector<std::vector<double>>& points, std::vector<double> mu,
                                 PotentialSpec potential, const AdmissibilitySpec& admissibility) {
  const std::size_t n = points.size();
  if (n == 0) throw Error("space needs at least one point");
  const std::size_t dim = points.front().size();
  if (dim == 0) throw Error("points must have at least one coordinate");
  for (std::size_t i = 0; i < n; ++i)
    if (points[i].size() != dim) throw Error("point " + std::to_string(i) + " has wrong dimension");
  detail::check_weights(mu, n);
  auto dist = detail::euclidean_distances(points, dim);
  auto phi = detail::resolve_potential(potential, dist, n, &points, dim);
  auto m = detail::resolve_admissibility(admissibility, potential, phi, dist, n, &points, dim);
  std::vector<double> flat;
  flat.reserve(n * dim);
  for (const auto& p : points) flat.insert(flat.end(), p.begin(), p.end());
  return DiscreteSpace(std::move(dist), n, std::move(flat), dim, std::move(mu), std::move(phi), std::move(m),
                       std::move(potential));
}

/// Builds a space from an explicit symmetric distance table (row-major n x n).
inline DiscreteSpace build_space_from_distances(std::vector<double> table, std::size_t n, std::vector<double> mu,
                                                PotentialSpec potential, const AdmissibilitySpec& admissibility) {
  if (n == 0 || table.size() != n * n) throw Error("distance table must be n x n with n > 0");
  for (std::size_t i = 0; i < n; ++i) {
    if (table[i * n + i] != 0.0) throw Error("distance table has nonzero diagonal at " + std::to_string(i));
    for (std::size_t j = 0; j < n; ++j) {
      const double d = table[i * n + j];
      if (!std::isfinite(d) || d < 0.0 || d != table[j * n + i] || (i != j && d == 0.0))
        throw Error("distance table is not a metric at (" + std::to_string(i) + ", " + std::to_string(j) + ")");
    }
  }
  detail::check_weights(mu, n);
  auto phi = detail::resolve_potential(potential, table, n, nullptr, std::nullopt);
  auto m = detail::resolve_admissibility(admissibility, potential, phi, table, n, nullptr, std::nullopt);
  return DiscreteSpace(std::move(table), n, {}, std::nullopt, std::move(mu), std::move(phi), std::move(m),
                       std::move(potential));
}

/// Indices of the open ball, ascending.
inline std::vector<PointIndex> ball_members(const DiscreteSpace& space, const Ball& ball) {
  auto s = space.ball_span(ball);
  std::vector<PointIndex> out(s.begin(), s.end());
  std::sort(out.begin(), out.end());
  return out;
}

inline double gamma_mass(const DiscreteSpace& space, std::span<const PointIndex> set) {
  double acc = 0.0;
  for (PointIndex i : set) acc += space.gamma()[i];
  return acc;
}

inline bool is_admissible(const DiscreteSpace& space, const Ball& ball, double alpha) {
  return ball.radius > 0.0 && ball.radius <= alpha * space.m()[ball.center];
}

/// Radii enumerating every distinct open ball about c with radius <= cap.
///
/// Each positive distance d <= cap is taken exactly (so B(c, d) excludes the
/// points at distance d), and the cap itself is appended.  Within one interval
/// between consecutive distances the ball is fixed while any dilate lambda*B
/// grows with r, so these radii also attain every supremum of
/// gamma(lambda B) / gamma(B).
inline std::vector<double> candidate_radii(const DiscreteSpace& space, PointIndex c, double cap) {
  std::vector<double> out;
  for (double d : space.sorted_distances(c)) {
    if (d <= 0.0) continue;
    if (d > cap) break;
    if (out.empty() || d != out.back()) out.push_back(d);
  }
  if (out.empty() || out.back() != cap) out.push_back(cap);
  return out;
}

/// Result of the metric-axiom audit.
struct MetricAudit {
  bool symmetric = true;
  bool zero_diagonal = true;
  bool triangle = true;
  std::size_t triples_checked = 0;
  double worst_triangle_excess = 0.0;
};

/// Exhaustive triangle-inequality scan for n <= exhaustive_limit; otherwise a
/// deterministic strided subsample of triples.
inline MetricAudit audit_metric(const DiscreteSpace& space, std::size_t exhaustive_limit = 500) {
  MetricAudit out;
  const std::size_t n = space.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (space.distance(i, i) != 0.0) out.zero_diagonal = false;
    for (std::size_t j = 0; j < n; ++j)
      if (space.distance(i, j) != space.distance(j, i)) out.symmetric = false;
  }
  const std::size_t stride = n <= exhaustive_limit ? 1 : (n + exhaustive_limit - 1) / exhaustive_limit;
  for (std::size_t i = 0; i < n; i += stride)
    for (std::size_t j = 0; j < n; j += stride)
      for (std::size_t k = 0; k < n; ++k) {
        ++out.triples_checked;
        const double excess = space.distance(i, k) - space.distance(i, j) - space.distance(j, k);
        const double scale = 1e-12 * std::max(1.0, space.distance(i, k));
        if (excess > scale) out.triangle = false;
        out.worst_triangle_excess = std::max(out.worst_triangle_excess, excess);
      }
  return out;
}

/// Greedy packing count of pairwise-disjoint half-radius balls centred in B.
/// This is a lower bound for the geometric-doubling number of B.
inline std::size_t half_ball_packing(const DiscreteSpace& space, const Ball& ball) {
  const double half = ball.radius / 2.0;
  std::vector<PointIndex> chosen;
  for (PointIndex z : space.ball_span(ball)) {
    if (space.distance(ball.center, z) + half > ball.radius) continue;
    bool disjoint = true;
    for (PointIndex w : chosen) {
      // Disjoint as point sets: no point sits in both open half-balls.
      for (PointIndex p : space.neighbors(w)) {
        if (space.distance(w, p) >= half) break;
        if (space.distance(z, p) < half) {
          disjoint = false;
          break;
        }
      }
      if (!disjoint) break;
    }
    if (disjoint) chosen.push_back(z);
  }
  return chosen.size();
}

}  // namespace tentlab

#endif  // TENTLAB_SPACE_HPP
