#ifndef TENTLAB_ATOMIC_HPP
#define TENTLAB_ATOMIC_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tentlab/functionals.hpp"
#include "tentlab/region.hpp"
#include "tentlab/space.hpp"

namespace tentlab {

// ---------------------------------------------------------------------------
// Greedy covering of tents
// ---------------------------------------------------------------------------

/// Greedy disjoint 1-admissible balls inside E whose 5-dilates' tents cover T(E).
///
/// Each step takes the center maximising
///   r*(c) = min(m(c), dist(c, X \ E), min_i dist(c, B^i))
/// (ties to the lowest index) and stops once every r* is zero, i.e. once every
/// point of E lies in a chosen ball.  The sequence of radii is nonincreasing.
inline std::vector<Ball> vitali_tent_cover(const DiscreteSpace& space, const PointMask& E) {
  const std::size_t n = space.size();
  const auto delta = distance_to_complement(space, E);
  std::vector<double> best(n, 0.0);
  for (PointIndex c = 0; c < n; ++c)
    if (E[c]) best[c] = std::min(space.m()[c], delta[c]);
  std::vector<Ball> balls;
  while (true) {
    PointIndex arg = n;
    double r = 0.0;
    for (PointIndex c = 0; c < n; ++c)
      if (best[c] > r) {
        r = best[c];
        arg = c;
      }
    if (arg == n) break;
    const Ball b{arg, r};
    balls.push_back(b);
    for (PointIndex z : space.ball_span(b))
      for (PointIndex c = 0; c < n; ++c)
        if (best[c] > 0.0) best[c] = std::min(best[c], space.distance(c, z));
  }
  return balls;
}

/// Is B(y, t) contained in `ball` (as point sets)?
inline bool ball_inside(const DiscreteSpace& space, PointIndex y, double t, const Ball& ball) {
  if (!(space.distance(ball.center, y) < ball.radius)) return false;
  for (PointIndex z : space.ball_span({y, t}))
    if (!(space.distance(ball.center, z) < ball.radius)) return false;
  return true;
}

struct CoverCertificate {
  bool disjoint = true;
  bool admissible = true;
  bool inside = true;
  bool covers = true;
  bool radii_nonincreasing = true;
  std::size_t balls = 0;
  std::size_t tent_nodes = 0;
  std::optional<NodeIndex> uncovered_witness;
  bool pass() const { return disjoint && admissible && inside && covers && radii_nonincreasing; }
};

/// Node-exact audit of a tent cover: disjointness, 1-admissibility, B^j in E,
/// and T(E) contained in the union of T(5 B^j).
inline CoverCertificate certify_cover(const RegionGrid& region, const PointMask& E, const std::vector<Ball>& balls) {
  const auto& space = region.space();
  CoverCertificate cert;
  cert.balls = balls.size();
  std::vector<int> owner(space.size(), -1);
  for (std::size_t j = 0; j < balls.size(); ++j) {
    const Ball& b = balls[j];
    if (!is_admissible(space, b, 1.0)) cert.admissible = false;
    if (j > 0 && b.radius > balls[j - 1].radius) cert.radii_nonincreasing = false;
    for (PointIndex z : space.ball_span(b)) {
      if (!E[z]) cert.inside = false;
      if (owner[z] >= 0) cert.disjoint = false;
      owner[z] = static_cast<int>(j);
    }
  }
  const auto tmask = tent_mask(region, E);
  for (NodeIndex v = 0; v < region.size(); ++v) {
    if (!tmask[v]) continue;
    ++cert.tent_nodes;
    bool hit = false;
    for (const Ball& b : balls)
      if (ball_inside(space, region.point(v), region.time(v), b.scaled(5.0))) {
        hit = true;
        break;
      }
    if (!hit) {
      cert.covers = false;
      if (!cert.uncovered_witness) cert.uncovered_witness = v;
    }
  }
  return cert;
}

// ---------------------------------------------------------------------------
// Level sets
// ---------------------------------------------------------------------------

/// Largest integer k with 2^k < value (value > 0).
inline int floor_log2_strict(double value) {
  int k = static_cast<int>(std::floor(std::log2(value)));
  while (std::ldexp(1.0, k) >= value) --k;
  while (std::ldexp(1.0, k + 1) < value) ++k;
  return k;
}

struct LevelSets {
  std::vector<double> a3;  // A_q^3 f per point
  int k_min = 0;
  int k_max = -1;
  std::map<int, std::vector<PointIndex>> sets;  // k -> E_k
  bool empty() const { return sets.empty(); }
  PointMask mask(int k) const {
    PointMask out(a3.size(), 0);
    const double thr = std::ldexp(1.0, k);
    for (std::size_t x = 0; x < a3.size(); ++x) out[x] = a3[x] > thr;
    return out;
  }
};

/// Superlevel sets E_k = {A_q^3 f > 2^k} for k in [k_min, k_max].
///
/// k_max is the largest k with 2^k < max A_q^3 f, so E_{k_max + 1} is empty.
/// k_min is the largest k with 2^k below every single-node contribution
/// (|f|^q gamma w / gamma(B(y,t)))^(1/q); each such node then sees all of
/// B(y, t) inside E_{k_min}, so supp f lies in T(E_{k_min}).
template <class T>
LevelSets level_sets(const RegionGrid& region, const TentFunction<T>& f, double q) {
  LevelSets out;
  out.a3 = a_q_alpha(region, f, q, 3.0);
  double cmin = std::numeric_limits<double>::infinity();
  for (NodeIndex v = 0; v < region.size(); ++v) {
    const double mag = std::abs(f[v]);
    if (mag == 0.0) continue;
    cmin = std::min(cmin, std::pow(std::pow(mag, q) * region.weight(v) / region.ball_mass(v), 1.0 / q));
  }
  if (!std::isfinite(cmin)) return out;
  const double amax = *std::max_element(out.a3.begin(), out.a3.end());
  out.k_max = floor_log2_strict(amax);
  out.k_min = std::min(floor_log2_strict(cmin), out.k_max);
  for (int k = out.k_min; k <= out.k_max; ++k) out.sets[k] = from_mask(out.mask(k));
  return out;
}

// ---------------------------------------------------------------------------
// Pointwise estimate
// ---------------------------------------------------------------------------

struct PointwiseReport {
  double lambda = 0.0;
  bool pass = true;
  PointIndex worst_x = 0;
  double worst_value = 0.0;
  std::size_t level_set_size = 0;
};

/// With E = {A_q^3 f > lambda}: max_x A_q(f 1_{D \ T(E)})(x) <= lambda.
template <class T>
PointwiseReport pointwise2_check(const RegionGrid& region, const TentFunction<T>& f, double q, double lambda,
                                 std::span<const double> a3) {
  if (!(lambda > 0.0)) throw Error("pointwise2_check: lambda must be positive");
  PointwiseReport rep;
  rep.lambda = lambda;
  PointMask E(a3.size(), 0);
  for (std::size_t x = 0; x < a3.size(); ++x) {
    E[x] = a3[x] > lambda;
    rep.level_set_size += E[x];
  }
  auto outside = tent_mask(region, E);
  for (auto& b : outside) b = !b;
  const auto a = a_q_alpha(region, f.restricted(outside), q, 1.0);
  for (PointIndex x = 0; x < a.size(); ++x)
    if (a[x] > rep.worst_value) {
      rep.worst_value = a[x];
      rep.worst_x = x;
    }
  rep.pass = rep.worst_value <= lambda * (1.0 + 1e-12);
  return rep;
}

template <class T>
PointwiseReport pointwise2_check(const RegionGrid& region, const TentFunction<T>& f, double q, double lambda) {
  const auto a3 = a_q_alpha(region, f, q, 3.0);
  return pointwise2_check(region, f, q, lambda, a3);
}

/// Set-level form of the pointwise argument at x in E: with x0 the nearest point
/// outside E, Gamma(x) \ T(E) must lie inside Gamma^3(x0).  Returns true when the
/// inclusion holds (vacuously when E = X).
inline bool pointwise2_inclusion(const RegionGrid& region, const PointMask& E, PointIndex x) {
  const auto& space = region.space();
  std::optional<PointIndex> x0;
  for (PointIndex z : space.neighbors(x))
    if (!E[z]) {
      x0 = z;
      break;
    }
  const auto tmask = tent_mask(region, E);
  bool ok = true;
  for_each_cone_node(region, x, 1.0, [&](NodeIndex v) {
    if (tmask[v]) return;
    if (!x0 || !(space.distance(*x0, region.point(v)) < 3.0 * region.time(v))) ok = false;
  });
  return ok;
}

// ---------------------------------------------------------------------------
// Atoms and the decomposition
// ---------------------------------------------------------------------------

/// Sparse tent function supported in T(ball).
template <class T = double>
struct Atom {
  NodeList support;
  std::vector<T> values;
  Ball ball{};
  double q = 1.0;

  TentFunction<T> to_dense(std::size_t nodes) const {
    TentFunction<T> out(nodes);
    for (std::size_t i = 0; i < support.size(); ++i) out[support[i]] = values[i];
    return out;
  }
};

template <class T = double>
struct Term {
  int k = 0;
  std::size_t j = 0;
  double lambda = 0.0;
  Atom<T> atom;
};

struct LevelRecord {
  int k = 0;
  std::size_t level_set_size = 0;
  double level_set_mass = 0.0;
  std::size_t balls = 0;
  double dilated_mass = 0.0;  // sum_j gamma(5 B_k^j)
  std::size_t assigned_nodes = 0;
};

struct DecompositionReport {
  std::vector<LevelRecord> levels;
  bool partition_complete = true;  // every supported node assigned to exactly one (k, j)
  std::optional<NodeIndex> unassigned_witness;
};

template <class T = double>
struct Decomposition {
  std::vector<Term<T>> terms;
  int k_min = 0;
  int k_max = -1;
  DecompositionReport report;

  double lambda_sum() const {
    double s = 0.0;
    for (const auto& t : terms) s += std::abs(t.lambda);
    return s;
  }
};

/// A_q^alpha of a sparse function (support nodes + values).
template <class T>
std::vector<double> a_q_alpha_sparse(const RegionGrid& region, std::span<const NodeIndex> support,
                                     std::span<const T> values, double q, double alpha) {
  const auto& space = region.space();
  std::vector<double> acc(space.size(), 0.0);
  for (std::size_t i = 0; i < support.size(); ++i) {
    const NodeIndex v = support[i];
    const double mag = std::abs(values[i]);
    if (mag == 0.0) continue;
    const double contrib = std::pow(mag, q) * region.weight(v) / region.ball_mass(v);
    for (PointIndex x : space.ball_span({region.point(v), alpha * region.time(v)})) acc[x] += contrib;
  }
  for (double& a : acc) a = std::pow(a, 1.0 / q);
  return acc;
}

/// Atomic decomposition into 5-atoms.
///
/// A_k = T(E_k) \ T(E_{k+1}); each supported node of A_k goes to the first
/// greedy ball j with the node in T(5 B_k^j), and
///   lambda_k^j = gamma(5B)^(1/q') (int_{5B} A_q(f 1_{A_k})^q d gamma)^(1/q),
///   a_k^j = chi_k^j 1_{A_k} f / lambda_k^j.
template <class T>
Decomposition<T> atomic_decompose(const RegionGrid& region, const TentFunction<T>& f, double q) {
  if (!(q >= 1.0) || !std::isfinite(q)) throw Error("atomic_decompose: q must lie in [1, inf)");
  const auto& space = region.space();
  Decomposition<T> dec;
  const LevelSets ls = level_sets(region, f, q);
  if (ls.empty()) return dec;
  dec.k_min = ls.k_min;
  dec.k_max = ls.k_max;
  std::vector<char> assigned(region.size(), 0);
  std::vector<char> tent_next = tent_mask(region, ls.mask(ls.k_min));
  for (int k = ls.k_min; k <= ls.k_max; ++k) {
    const PointMask Ek = ls.mask(k);
    const std::vector<char> tent_k = std::move(tent_next);
    tent_next = tent_mask(region, ls.mask(k + 1));
    NodeList ak;
    for (NodeIndex v = 0; v < region.size(); ++v)
      if (tent_k[v] && !tent_next[v] && f[v] != T{}) ak.push_back(v);
    LevelRecord rec;
    rec.k = k;
    for (PointIndex x = 0; x < space.size(); ++x)
      if (Ek[x]) {
        ++rec.level_set_size;
        rec.level_set_mass += space.gamma()[x];
      }
    if (ak.empty()) {
      dec.report.levels.push_back(rec);
      continue;
    }
    const auto balls = vitali_tent_cover(space, Ek);
    rec.balls = balls.size();
    std::vector<T> ak_vals(ak.size());
    for (std::size_t i = 0; i < ak.size(); ++i) ak_vals[i] = f[ak[i]];
    const auto a_level = a_q_alpha_sparse<T>(region, ak, ak_vals, q, 1.0);

    std::vector<std::size_t> owner(ak.size(), balls.size());
    for (std::size_t i = 0; i < ak.size(); ++i) {
      const NodeIndex v = ak[i];
      for (std::size_t j = 0; j < balls.size(); ++j)
        if (ball_inside(space, region.point(v), region.time(v), balls[j].scaled(5.0))) {
          owner[i] = j;
          break;
        }
      if (owner[i] == balls.size()) {
        dec.report.partition_complete = false;
        if (!dec.report.unassigned_witness) dec.report.unassigned_witness = v;
      } else {
        if (assigned[v]) dec.report.partition_complete = false;
        assigned[v] = 1;
        ++rec.assigned_nodes;
      }
    }
    for (std::size_t j = 0; j < balls.size(); ++j) {
      const Ball big = balls[j].scaled(5.0);
      const double big_mass = space.ball_mass(big);
      rec.dilated_mass += big_mass;
      Term<T> term;
      term.k = k;
      term.j = j;
      for (std::size_t i = 0; i < ak.size(); ++i)
        if (owner[i] == j) {
          term.atom.support.push_back(ak[i]);
          term.atom.values.push_back(ak_vals[i]);
        }
      if (term.atom.support.empty()) continue;
      double energy = 0.0;
      for (PointIndex x : space.ball_span(big)) energy += std::pow(a_level[x], q) * space.gamma()[x];
      term.lambda = std::pow(big_mass, 1.0 - 1.0 / q) * std::pow(energy, 1.0 / q);
      if (term.lambda == 0.0) continue;
      for (auto& val : term.atom.values) val = val / term.lambda;
      term.atom.ball = big;
      term.atom.q = q;
      dec.terms.push_back(std::move(term));
    }
    dec.report.levels.push_back(rec);
  }
  for (NodeIndex v = 0; v < region.size(); ++v)
    if (f[v] != T{} && !assigned[v]) {
      dec.report.partition_complete = false;
      if (!dec.report.unassigned_witness) dec.report.unassigned_witness = v;
    }
  return dec;
}

template <class T>
TentFunction<T> reconstruct(const Decomposition<T>& dec, std::size_t nodes) {
  TentFunction<T> out(nodes);
  for (const auto& term : dec.terms)
    for (std::size_t i = 0; i < term.atom.support.size(); ++i)
      out[term.atom.support[i]] += term.lambda * term.atom.values[i];
  return out;
}

struct AtomReport {
  bool support_ok = true;
  bool size_ok = true;
  bool norm_ok = true;
  double energy = 0.0;          // sum_{T(B)} |a|^q gamma w
  double energy_bound = 0.0;    // gamma(B)^(1-q)
  double t1q_norm = 0.0;        // ||a||_{t^{1,q}}
  double holder_bound = 0.0;    // gamma(B)^(1/q') (int_B A_q a^q)^(1/q)
  std::optional<NodeIndex> support_witness;
  bool pass() const { return support_ok && size_ok && norm_ok; }
  std::string failure() const {
    if (!support_ok) return "support leaves T(B) at node " + std::to_string(support_witness.value_or(0));
    if (!size_ok) return "size bound exceeded";
    if (!norm_ok) return "t^{1,q} norm exceeds Hoelder chain";
    return {};
  }
};

/// Support in T(B), size <= gamma(B)^(1-q) (relative 1e-9), and
/// ||a||_{t^{1,q}} <= gamma(B)^(1/q') (int_B A_q a^q)^(1/q) <= 1.
template <class T>
AtomReport validate_atom(const RegionGrid& region, const Atom<T>& atom) {
  const auto& space = region.space();
  AtomReport rep;
  const double q = atom.q;
  const double mass = space.ball_mass(atom.ball);
  for (std::size_t i = 0; i < atom.support.size(); ++i) {
    const NodeIndex v = atom.support[i];
    if (!ball_inside(space, region.point(v), region.time(v), atom.ball)) {
      rep.support_ok = false;
      if (!rep.support_witness) rep.support_witness = v;
    }
    rep.energy += std::pow(std::abs(atom.values[i]), q) * region.weight(v);
  }
  rep.energy_bound = std::pow(mass, 1.0 - q);
  rep.size_ok = rep.energy <= rep.energy_bound * (1.0 + 1e-9);
  const auto a = a_q_alpha_sparse<T>(region, atom.support, atom.values, q, 1.0);
  double inner = 0.0;
  for (PointIndex x = 0; x < space.size(); ++x) {
    rep.t1q_norm += a[x] * space.gamma()[x];
  }
  for (PointIndex x : space.ball_span(atom.ball)) inner += std::pow(a[x], q) * space.gamma()[x];
  rep.holder_bound = std::pow(mass, 1.0 - 1.0 / q) * std::pow(inner, 1.0 / q);
  rep.norm_ok = rep.t1q_norm <= rep.holder_bound * (1.0 + 1e-9) && rep.holder_bound <= 1.0 + 1e-9;
  return rep;
}

}  // namespace tentlab

#endif  // TENTLAB_ATOMIC_HPP
