#ifndef TENTLAB_DYADIC_HPP
#define TENTLAB_DYADIC_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tentlab/space.hpp"

namespace tentlab {

struct DyadicGeneration {
  int k = 0;           // side length 2^-k
  double side = 0.0;
  std::vector<std::size_t> cube_of;                // point -> cube
  std::vector<std::vector<PointIndex>> members;    // cube -> points (ascending)
  std::vector<double> mass;                        // gamma(Q)
  std::vector<double> diam;                        // max pairwise distance in Q
  std::vector<std::size_t> parent;                 // cube -> cube of the previous (coarser) generation
};

/// Nested partitions of a Euclidean cloud by grid cells of side 2^-k, offset
/// per axis by (-1)^k t_d 2^-k / 3 with t_d in {0, 1, 2}.  Generations run
/// coarse to fine; only nonempty cells are kept.
struct DyadicSystem {
  std::vector<int> shift;
  std::vector<DyadicGeneration> generations;

  std::string label() const {
    std::string s = "shift(";
    for (std::size_t d = 0; d < shift.size(); ++d) s += (d ? "," : "") + std::to_string(shift[d]) + "/3";
    return s + ")";
  }
};

namespace detail {

inline long long floor_div2(long long a) { return a >= 0 ? a / 2 : -((-a + 1) / 2); }

inline double cube_diameter(const DiscreteSpace& space, const std::vector<PointIndex>& pts) {
  double d = 0.0;
  for (std::size_t a = 0; a < pts.size(); ++a)
    for (std::size_t b = a + 1; b < pts.size(); ++b) d = std::max(d, space.distance(pts[a], pts[b]));
  return d;
}

}  // namespace detail

/// Generation range [floor(log2(1 / diam X)) - 1, ceil(log2(1 / min spacing)) + 1]:
/// the coarsest side is at least twice the diameter, the finest is below the spacing.
inline std::pair<int, int> default_generation_range(const DiscreteSpace& space) {
  const double diam = space.diameter();
  const double spacing = space.min_spacing();
  if (!(diam > 0.0)) return {0, 0};
  const int lo = static_cast<int>(std::floor(std::log2(1.0 / diam))) - 1;
  const int hi = static_cast<int>(std::ceil(std::log2(1.0 / spacing))) + 1;
  return {lo, std::max(lo, hi)};
}

/// All 3^n shifted grid systems.  Cell indices are computed in floating point at
/// the finest generation only and coarsened by exact integer recursion
///   I_k = floor((I_{k+1} - (-1)^k t) / 2),
/// so nesting holds by construction.
inline std::vector<DyadicSystem> build_shifted_systems(const DiscreteSpace& space,
                                                       std::optional<std::pair<int, int>> k_range = std::nullopt) {
  const auto dim_opt = space.euclidean_dim();
  if (!dim_opt) throw Error("build_shifted_systems: space has no Euclidean embedding");
  const std::size_t dim = *dim_opt;
  const auto [k_lo, k_hi] = k_range.value_or(default_generation_range(space));
  if (k_hi < k_lo) throw Error("build_shifted_systems: empty generation range");
  const std::size_t n = space.size();
  std::size_t count = 1;
  for (std::size_t d = 0; d < dim; ++d) count *= 3;

  std::vector<DyadicSystem> systems;
  for (std::size_t code = 0; code < count; ++code) {
    DyadicSystem sys;
    std::size_t c = code;
    for (std::size_t d = 0; d < dim; ++d) {
      sys.shift.push_back(static_cast<int>(c % 3));
      c /= 3;
    }
    const auto sign = [](int k) { return (k % 2 == 0) ? 1 : -1; };
    // Finest cell indices.
    std::vector<std::vector<long long>> idx(n, std::vector<long long>(dim));
    {
      const double side = std::ldexp(1.0, -k_hi);
      for (PointIndex i = 0; i < n; ++i) {
        const auto x = space.coords(i);
        for (std::size_t d = 0; d < dim; ++d) {
          const double offset = sign(k_hi) * side * sys.shift[d] / 3.0;
          idx[i][d] = static_cast<long long>(std::floor((x[d] - offset) / side));
        }
      }
    }
    std::vector<DyadicGeneration> fine_to_coarse;
    for (int k = k_hi; k >= k_lo; --k) {
      if (k < k_hi)
        for (PointIndex i = 0; i < n; ++i)
          for (std::size_t d = 0; d < dim; ++d) idx[i][d] = detail::floor_div2(idx[i][d] - sign(k) * sys.shift[d]);
      DyadicGeneration gen;
      gen.k = k;
      gen.side = std::ldexp(1.0, -k);
      gen.cube_of.resize(n);
      std::map<std::vector<long long>, std::size_t> ids;
      for (PointIndex i = 0; i < n; ++i) {
        auto [it, inserted] = ids.emplace(idx[i], gen.members.size());
        if (inserted) gen.members.emplace_back();
        gen.cube_of[i] = it->second;
        gen.members[it->second].push_back(i);
      }
      for (const auto& pts : gen.members) {
        gen.mass.push_back(gamma_mass(space, pts));
        gen.diam.push_back(detail::cube_diameter(space, pts));
      }
      fine_to_coarse.push_back(std::move(gen));
    }
    std::reverse(fine_to_coarse.begin(), fine_to_coarse.end());
    sys.generations = std::move(fine_to_coarse);
    for (std::size_t g = 1; g < sys.generations.size(); ++g) {
      auto& gen = sys.generations[g];
      const auto& up = sys.generations[g - 1];
      gen.parent.resize(gen.members.size());
      for (std::size_t q = 0; q < gen.members.size(); ++q) gen.parent[q] = up.cube_of[gen.members[q].front()];
    }
    systems.push_back(std::move(sys));
  }
  return systems;
}

struct SystemAudit {
  bool partition = true;
  bool nesting = true;
  bool positive_mass = true;
};

/// Every generation partitions X, every finer cube sits in exactly one coarser
/// cube (its parent), and every cube has positive mass.
inline SystemAudit audit_system(const DiscreteSpace& space, const DyadicSystem& sys) {
  SystemAudit a;
  for (std::size_t g = 0; g < sys.generations.size(); ++g) {
    const auto& gen = sys.generations[g];
    std::vector<int> seen(space.size(), 0);
    for (std::size_t q = 0; q < gen.members.size(); ++q) {
      if (!(gen.mass[q] > 0.0)) a.positive_mass = false;
      for (PointIndex i : gen.members[q]) {
        ++seen[i];
        if (gen.cube_of[i] != q) a.partition = false;
      }
    }
    for (int s : seen)
      if (s != 1) a.partition = false;
    if (g == 0) continue;
    const auto& up = sys.generations[g - 1];
    for (std::size_t q = 0; q < gen.members.size(); ++q)
      for (PointIndex i : gen.members[q])
        if (up.cube_of[i] != gen.parent[q]) a.nesting = false;
  }
  return a;
}

/// M_D u(x) = max over cubes Q containing x of the gamma-average of |u| on Q.
inline std::vector<double> dyadic_maximal(const DiscreteSpace& space, const DyadicSystem& sys,
                                          std::span<const double> u) {
  std::vector<double> out(space.size(), 0.0);
  std::vector<double> avg;
  for (const auto& gen : sys.generations) {
    avg.assign(gen.members.size(), 0.0);
    for (PointIndex i = 0; i < space.size(); ++i) avg[gen.cube_of[i]] += std::abs(u[i]) * space.gamma()[i];
    for (std::size_t q = 0; q < avg.size(); ++q) avg[q] /= gen.mass[q];
    for (PointIndex i = 0; i < space.size(); ++i) out[i] = std::max(out[i], avg[gen.cube_of[i]]);
  }
  return out;
}

/// Distinct alpha-admissible balls: (center, radius, member count).
struct AdmissibleBall {
  PointIndex center;
  double radius;
  std::size_t count;
};

inline std::vector<AdmissibleBall> enumerate_admissible_balls(const DiscreteSpace& space, double alpha) {
  std::vector<AdmissibleBall> out;
  for (PointIndex c = 0; c < space.size(); ++c)
    for (double r : candidate_radii(space, c, alpha * space.m()[c])) out.push_back({c, r, space.count_open(c, r)});
  return out;
}

/// M_alpha u(x): max gamma-average of |u| over alpha-admissible balls containing x.
///
/// Per center the admissible balls are nested prefixes of the neighbour order,
/// so a point at position p is covered by exactly the balls with count > p and
/// receives their suffix maximum.
inline std::vector<double> local_maximal(const DiscreteSpace& space, std::span<const double> u, double alpha) {
  if (!(alpha > 0.0)) throw Error("local_maximal: alpha must be positive");
  std::vector<double> out(space.size(), 0.0);
  std::vector<double> prefix;
  std::vector<std::size_t> counts;
  std::vector<double> avgs;
  for (PointIndex c = 0; c < space.size(); ++c) {
    const auto radii = candidate_radii(space, c, alpha * space.m()[c]);
    counts.clear();
    for (double r : radii) counts.push_back(space.count_open(c, r));
    const std::size_t reach = counts.back();
    auto nb = space.neighbors(c);
    prefix.assign(reach + 1, 0.0);
    for (std::size_t p = 0; p < reach; ++p) prefix[p + 1] = prefix[p] + std::abs(u[nb[p]]) * space.gamma()[nb[p]];
    avgs.resize(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) avgs[i] = prefix[counts[i]] / space.prefix_mass(c, counts[i]);
    double run = 0.0;
    for (std::size_t i = counts.size(); i-- > 0;) {
      run = std::max(run, avgs[i]);
      const std::size_t from = i == 0 ? 0 : counts[i - 1];
      for (std::size_t p = from; p < counts[i]; ++p) out[nb[p]] = std::max(out[nb[p]], run);
    }
  }
  return out;
}

struct ContainmentReport {
  std::size_t balls = 0;
  std::size_t contained = 0;
  double c_X = 0.0;               // max over balls of min_systems diam(Q_B) / diam(B)
  double mass_constant = 0.0;     // max over balls of min_systems gamma(Q_B) / gamma(B)
  std::optional<AdmissibleBall> worst_diameter_ball;
  std::optional<AdmissibleBall> uncontained_witness;
  bool all_contained() const { return contained == balls; }
};

/// For every alpha-admissible ball, the smallest cube of each system that
/// contains it; records the best diameter and mass ratios across systems.
/// A singleton ball inside a singleton cube has diameter ratio 0.
inline ContainmentReport ball_containment(const DiscreteSpace& space, std::span<const DyadicSystem> systems,
                                          double alpha) {
  ContainmentReport rep;
  const std::size_t n = space.size();
  // first_diff[s][g] for the current center: first neighbour position whose cube differs.
  std::vector<std::vector<std::size_t>> first_diff(systems.size());
  for (PointIndex c = 0; c < n; ++c) {
    auto nb = space.neighbors(c);
    for (std::size_t s = 0; s < systems.size(); ++s) {
      const auto& gens = systems[s].generations;
      first_diff[s].assign(gens.size(), n);
      for (std::size_t g = 0; g < gens.size(); ++g) {
        const auto home = gens[g].cube_of[c];
        for (std::size_t p = 0; p < n; ++p)
          if (gens[g].cube_of[nb[p]] != home) {
            first_diff[s][g] = p;
            break;
          }
      }
    }
    // Diameters of the nested prefixes are grown one member at a time.
    double ball_diam = 0.0;
    std::size_t grown = 1;
    for (double r : candidate_radii(space, c, alpha * space.m()[c])) {
      const std::size_t cnt = space.count_open(c, r);
      for (; grown < cnt; ++grown)
        for (std::size_t a = 0; a < grown; ++a) ball_diam = std::max(ball_diam, space.distance(nb[a], nb[grown]));
      const double ball_mass = space.prefix_mass(c, cnt);
      ++rep.balls;
      double best_diam = std::numeric_limits<double>::infinity();
      double best_mass = std::numeric_limits<double>::infinity();
      for (std::size_t s = 0; s < systems.size(); ++s) {
        const auto& gens = systems[s].generations;
        for (std::size_t g = gens.size(); g-- > 0;) {
          if (first_diff[s][g] < cnt) continue;
          const auto q = gens[g].cube_of[c];
          const double dq = gens[g].diam[q];
          const double ratio = dq == 0.0 ? 0.0 : (ball_diam == 0.0 ? std::numeric_limits<double>::infinity() : dq / ball_diam);
          best_diam = std::min(best_diam, ratio);
          best_mass = std::min(best_mass, gens[g].mass[q] / ball_mass);
          break;
        }
      }
      const AdmissibleBall here{c, r, cnt};
      if (!std::isfinite(best_mass)) {
        if (!rep.uncontained_witness) rep.uncontained_witness = here;
        continue;
      }
      ++rep.contained;
      if (!rep.worst_diameter_ball || best_diam > rep.c_X) {
        rep.c_X = best_diam;
        rep.worst_diameter_ball = here;
      }
      rep.mass_constant = std::max(rep.mass_constant, best_mass);
    }
  }
  return rep;
}

struct DominationReport {
  double constant = 0.0;   // measured C~ used on the right-hand side
  double worst_ratio = 0.0;  // max_x M_alpha u(x) / (C~ sum_D M_D u(x))
  PointIndex worst_x = 0;
  bool pass = true;
};

/// M_alpha u <= C~ sum_D M_D u pointwise.
inline DominationReport check_domination(const DiscreteSpace& space, std::span<const DyadicSystem> systems,
                                         std::span<const double> u, double alpha, double constant) {
  DominationReport rep;
  rep.constant = constant;
  const auto local = local_maximal(space, u, alpha);
  std::vector<double> sum(space.size(), 0.0);
  for (const auto& sys : systems) {
    const auto md = dyadic_maximal(space, sys, u);
    for (PointIndex x = 0; x < space.size(); ++x) sum[x] += md[x];
  }
  for (PointIndex x = 0; x < space.size(); ++x) {
    const double rhs = constant * sum[x];
    const double ratio = rhs > 0.0 ? local[x] / rhs : (local[x] > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    if (ratio > rep.worst_ratio) {
      rep.worst_ratio = ratio;
      rep.worst_x = x;
    }
  }
  rep.pass = rep.worst_ratio <= 1.0 + 1e-12;
  return rep;
}

struct WeakTypeReport {
  std::size_t checks = 0;
  std::size_t violations = 0;
  double measured_constant = 0.0;  // max lambda * gamma({M u > lambda}) / ||u||_1
  double allowed_constant = 1.0;
  bool pass() const { return violations == 0; }
};

inline double l1_norm(const DiscreteSpace& space, std::span<const double> u) {
  double s = 0.0;
  for (PointIndex x = 0; x < space.size(); ++x) s += std::abs(u[x]) * space.gamma()[x];
  return s;
}

/// gamma({maximal > lambda}) <= allowed * ||u||_1 / lambda for every lambda in the grid.
inline void weak11_accumulate(const DiscreteSpace& space, std::span<const double> maximal, double u_l1,
                              std::span<const double> lambdas, WeakTypeReport& rep) {
  for (double lam : lambdas) {
    double mass = 0.0;
    for (PointIndex x = 0; x < space.size(); ++x)
      if (maximal[x] > lam) mass += space.gamma()[x];
    ++rep.checks;
    if (u_l1 > 0.0) rep.measured_constant = std::max(rep.measured_constant, lam * mass / u_l1);
    if (mass > rep.allowed_constant * u_l1 / lam * (1.0 + 1e-12)) ++rep.violations;
  }
}

/// Weak (1,1) for one dyadic system: constant exactly 1.
inline WeakTypeReport weak11_check(const DiscreteSpace& space, const DyadicSystem& sys, std::span<const double> u,
                                   std::span<const double> lambdas) {
  WeakTypeReport rep;
  rep.allowed_constant = 1.0;
  weak11_accumulate(space, dyadic_maximal(space, sys, u), l1_norm(space, u), lambdas, rep);
  return rep;
}

/// Weak (1,1) for M_alpha with the constant C~ * S^2 (S systems) that follows
/// from the pointwise domination and the dyadic bound.
inline WeakTypeReport weak11_check_local(const DiscreteSpace& space, std::size_t system_count, double constant,
                                         std::span<const double> u, double alpha, std::span<const double> lambdas) {
  WeakTypeReport rep;
  rep.allowed_constant = constant * static_cast<double>(system_count * system_count);
  weak11_accumulate(space, local_maximal(space, u, alpha), l1_norm(space, u), lambdas, rep);
  return rep;
}

/// Point-major field U(x, s) over an auxiliary index set with weights sigma_s.
struct LatticeField {
  std::size_t points = 0;
  std::vector<double> sigma;
  std::vector<double> values;  // values[x * sigma.size() + s]
  double& at(PointIndex x, std::size_t s) { return values[x * sigma.size() + s]; }
  double at(PointIndex x, std::size_t s) const { return values[x * sigma.size() + s]; }
  std::vector<double> component(std::size_t s) const {
    std::vector<double> out(points);
    for (PointIndex x = 0; x < points; ++x) out[x] = at(x, s);
    return out;
  }
};

/// Componentwise alpha-local maximal function of a lattice field.
inline LatticeField lattice_maximal(const DiscreteSpace& space, const LatticeField& U, double alpha) {
  LatticeField out{U.points, U.sigma, std::vector<double>(U.values.size(), 0.0)};
  for (std::size_t s = 0; s < U.sigma.size(); ++s) {
    const auto m = local_maximal(space, U.component(s), alpha);
    for (PointIndex x = 0; x < U.points; ++x) out.at(x, s) = m[x];
  }
  return out;
}

inline LatticeField lattice_dyadic_maximal(const DiscreteSpace& space, const DyadicSystem& sys, const LatticeField& U) {
  LatticeField out{U.points, U.sigma, std::vector<double>(U.values.size(), 0.0)};
  for (std::size_t s = 0; s < U.sigma.size(); ++s) {
    const auto m = dyadic_maximal(space, sys, U.component(s));
    for (PointIndex x = 0; x < U.points; ++x) out.at(x, s) = m[x];
  }
  return out;
}

/// ||U||_{L^p(gamma; L^q(sigma))}.
inline double lattice_norm(const DiscreteSpace& space, const LatticeField& U, double p, double q) {
  double total = 0.0;
  for (PointIndex x = 0; x < U.points; ++x) {
    double inner = 0.0;
    for (std::size_t s = 0; s < U.sigma.size(); ++s) inner += std::pow(std::abs(U.at(x, s)), q) * U.sigma[s];
    total += std::pow(inner, p / q) * space.gamma()[x];
  }
  return std::pow(total, 1.0 / p);
}

}  // namespace tentlab

#endif  // TENTLAB_DYADIC_HPP
