#ifndef TENTLAB_SUITE_HPP
#define TENTLAB_SUITE_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <future>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tentlab/atomic.hpp"
#include "tentlab/conditions.hpp"
#include "tentlab/cone_cover.hpp"
#include "tentlab/dyadic.hpp"
#include "tentlab/functionals.hpp"
#include "tentlab/io.hpp"
#include "tentlab/log.hpp"
#include "tentlab/presets.hpp"
#include "tentlab/random.hpp"
#include "tentlab/region.hpp"
#include "tentlab/report.hpp"
#include "tentlab/space.hpp"

namespace tentlab {

inline constexpr const char* kConfigSchema = "tentlab.config/1";

struct SuiteSelection {
  bool space = true;
  bool tent = true;
  bool functionals = true;
  bool atomic = true;
  bool dyadic = true;
  bool cone_cover = true;
};

struct ScenarioConfig {
  std::string space_preset = "gaussian_line";
  std::string space_file;  // overrides the preset when set
  std::optional<std::size_t> time_levels;
  std::optional<double> t_min;
  std::optional<double> t_max;
  double p = 1.0;
  std::vector<double> q = {1.0, 2.0};
  std::vector<double> doubling_apertures = {0.5, 1.0, 2.0, 5.0};
  std::vector<std::pair<double, double>> aperture_pairs = {{1.0, 2.0}, {1.0, 3.0}, {2.0, 5.0}};
  std::uint64_t seed = 1;
  std::size_t corpus_size = 20;
  std::size_t trials = 20;
  std::size_t test_functions = 5;
  SuiteSelection suites;
  std::string out_dir = "tentlab_out";
  ReportFormat format = ReportFormat::json;
  bool parallel = false;
};

namespace detail {

template <class... Args>
std::string cat(const Args&... args) {
  std::ostringstream os;
  os.precision(17);
  (os << ... << args);
  return os.str();
}

}  // namespace detail

/// Rejects out-of-range values with the offending field named.
inline void validate_config(const ScenarioConfig& c) {
  if (c.space_file.empty() && c.space_preset.empty()) throw ParseError("config.space: need a preset or a file");
  if (!c.space_file.empty() && !std::filesystem::exists(c.space_file))
    throw ParseError("config.space.file: '" + c.space_file + "' does not exist");
  if (!(c.p > 0.0) || !std::isfinite(c.p)) throw ParseError("config.p: must lie in (0, inf)");
  if (c.q.empty()) throw ParseError("config.q: need at least one exponent");
  for (double q : c.q)
    if (!(q >= 1.0) || !std::isfinite(q)) throw ParseError("config.q: exponents must lie in [1, inf)");
  for (double a : c.doubling_apertures)
    if (!(a > 0.0)) throw ParseError("config.doubling_apertures: must be positive");
  for (const auto& [b, a] : c.aperture_pairs)
    if (!(b > 0.0) || !(a >= b)) throw ParseError("config.aperture_pairs: need 0 < beta <= alpha");
  if (c.time_levels && *c.time_levels == 0) throw ParseError("config.time_grid.levels: must be positive");
  if (c.corpus_size == 0) throw ParseError("config.corpus_size: must be positive");
}

inline ScenarioConfig config_from_json(const nlohmann::json& j) {
  using detail::json_field;
  if (!j.is_object()) throw ParseError("config: expected a JSON object");
  ScenarioConfig c;
  if (j.contains("schema") && j["schema"] != kConfigSchema)
    throw ParseError("config.schema: unsupported '" + j["schema"].dump() + "'");
  auto get = [&](const char* key, auto& target) {
    if (j.contains(key)) target = json_field<std::decay_t<decltype(target)>>(j, key, "config");
  };
  if (j.contains("space")) {
    const auto& s = j["space"];
    if (s.is_string()) {
      c.space_preset = s.get<std::string>();
    } else if (s.is_object()) {
      if (s.contains("preset")) c.space_preset = json_field<std::string>(s, "preset", "config.space");
      if (s.contains("file")) c.space_file = json_field<std::string>(s, "file", "config.space");
    } else {
      throw ParseError("config.space: expected a preset name or an object");
    }
  }
  if (j.contains("time_grid")) {
    const auto& g = j["time_grid"];
    if (g.contains("levels")) c.time_levels = json_field<std::size_t>(g, "levels", "config.time_grid");
    if (g.contains("t_min")) c.t_min = json_field<double>(g, "t_min", "config.time_grid");
    if (g.contains("t_max")) c.t_max = json_field<double>(g, "t_max", "config.time_grid");
  }
  get("p", c.p);
  if (j.contains("q")) {
    if (j["q"].is_number()) c.q = {j["q"].get<double>()};
    else c.q = json_field<std::vector<double>>(j, "q", "config");
  }
  get("doubling_apertures", c.doubling_apertures);
  get("aperture_pairs", c.aperture_pairs);
  get("seed", c.seed);
  get("corpus_size", c.corpus_size);
  get("trials", c.trials);
  get("test_functions", c.test_functions);
  if (j.contains("suites")) {
    const auto& s = j["suites"];
    auto flag = [&](const char* key, bool& target) {
      if (s.contains(key)) target = json_field<bool>(s, key, "config.suites");
    };
    flag("space", c.suites.space);
    flag("tent", c.suites.tent);
    flag("functionals", c.suites.functionals);
    flag("atomic", c.suites.atomic);
    flag("dyadic", c.suites.dyadic);
    flag("cone_cover", c.suites.cone_cover);
  }
  get("out", c.out_dir);
  if (j.contains("format")) {
    const auto f = json_field<std::string>(j, "format", "config");
    if (f == "json") c.format = ReportFormat::json;
    else if (f == "csv") c.format = ReportFormat::csv;
    else throw ParseError("config.format: expected json or csv");
  }
  get("parallel", c.parallel);
  validate_config(c);
  return c;
}

/// The parts of the config that determine report content.
inline nlohmann::ordered_json scenario_json(const ScenarioConfig& c) {
  nlohmann::ordered_json j;
  j["schema"] = kConfigSchema;
  if (c.space_file.empty()) j["space"] = {{"preset", c.space_preset}};
  else j["space"] = {{"file", c.space_file}};
  nlohmann::ordered_json grid = nlohmann::ordered_json::object();
  if (c.time_levels) grid["levels"] = *c.time_levels;
  if (c.t_min) grid["t_min"] = *c.t_min;
  if (c.t_max) grid["t_max"] = *c.t_max;
  j["time_grid"] = grid;
  j["p"] = c.p;
  j["q"] = c.q;
  j["doubling_apertures"] = c.doubling_apertures;
  j["aperture_pairs"] = c.aperture_pairs;
  j["seed"] = c.seed;
  j["corpus_size"] = c.corpus_size;
  j["trials"] = c.trials;
  j["test_functions"] = c.test_functions;
  j["suites"] = {{"space", c.suites.space},           {"tent", c.suites.tent},
                 {"functionals", c.suites.functionals}, {"atomic", c.suites.atomic},
                 {"dyadic", c.suites.dyadic},         {"cone_cover", c.suites.cone_cover}};
  return j;
}

/// Space and time grid named by the config, with overrides applied.
inline NamedSpace load_scenario_space(const ScenarioConfig& c) {
  NamedSpace ns;
  if (!c.space_file.empty()) {
    auto space = std::make_shared<const DiscreteSpace>(load_space(c.space_file));
    ns = {c.space_file, space, TimeGrid::default_for(*space, 32)};
  } else {
    ns = preset_by_name(c.space_preset);
  }
  if (c.time_levels || c.t_min || c.t_max) {
    const auto m = ns.space->m();
    const auto [lo, hi] = std::minmax_element(m.begin(), m.end());
    ns.grid = TimeGrid::log_uniform(c.t_min.value_or(*lo / 8.0), c.t_max.value_or(*hi), c.time_levels.value_or(32));
  }
  return ns;
}

/// Shared inputs of one suite run.
struct SuiteContext {
  ScenarioConfig config;
  NamedSpace named;
  RegionGrid region;
  std::vector<TentFunction<double>> corpus;

  const DiscreteSpace& space() const { return *named.space; }
  Rng rng(std::uint64_t stream) const { return Rng(config.seed * 0x9E3779B97F4A7C15ULL + stream); }
};

inline SuiteContext make_context(const ScenarioConfig& c) {
  auto named = load_scenario_space(c);
  auto region = build_region(*named.space, named.grid);
  auto corpus = random_corpus(region, c.corpus_size, c.seed);
  return {c, std::move(named), std::move(region), std::move(corpus)};
}

struct SuiteOutput {
  std::vector<CheckRecord> checks;
  std::vector<PlotSeries> plots;

  CheckRecord& add(std::string name, std::string property) {
    CheckRecord rec;
    rec.name = std::move(name);
    rec.property = std::move(property);
    checks.push_back(std::move(rec));
    return checks.back();
  }
};

namespace detail {

inline double relative_gap(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

inline std::string node_label(const RegionGrid& region, NodeIndex v) {
  return cat("node ", v, " (y=", region.point(v), ", t=", region.time(v), ")");
}

inline bool nonempty_proper(const PointMask& E) {
  const auto k = std::count(E.begin(), E.end(), char{1});
  return k > 0 && static_cast<std::size_t>(k) < E.size();
}

inline double dual_exponent(double q) {
  return q == 1.0 ? std::numeric_limits<double>::infinity() : q / (q - 1.0);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// space
// ---------------------------------------------------------------------------

inline void suite_space(const SuiteContext& ctx, SuiteOutput& out) {
  using detail::cat;
  const auto& space = ctx.space();
  const auto& cfg = ctx.config;
  auto rng = ctx.rng(1);
  {
    const auto a = audit_metric(space);
    auto& c = out.add("space.metric_axioms", "distances are symmetric, vanish exactly on the diagonal and satisfy the triangle inequality");
    c.measure("points", static_cast<double>(space.size()))
        .measure("triples_checked", static_cast<double>(a.triples_checked))
        .measure("worst_triangle_excess", a.worst_triangle_excess);
    c.tolerance = 1e-12;
    c.assert_that(a.symmetric && a.zero_diagonal && a.triangle,
                  cat("symmetric=", a.symmetric, " zero_diagonal=", a.zero_diagonal, " triangle=", a.triangle));
  }
  {
    auto& c = out.add("space.weights", "gamma = mu exp(-phi) with every gamma and m positive");
    std::optional<PointIndex> bad;
    double worst = 0.0;
    for (PointIndex i = 0; i < space.size(); ++i) {
      const double expect = space.mu()[i] * std::exp(-space.phi()[i]);
      worst = std::max(worst, detail::relative_gap(expect, space.gamma()[i]));
      if (!(space.gamma()[i] > 0.0) || !(space.m()[i] > 0.0)) bad = bad.value_or(i);
    }
    c.measure("total_mass", gamma_mass(space, from_mask(PointMask(space.size(), 1))))
        .measure("min_m", *std::min_element(space.m().begin(), space.m().end()))
        .measure("max_m", *std::max_element(space.m().begin(), space.m().end()))
        .measure("worst_gamma_relative_error", worst);
    c.tolerance = 1e-15;
    c.assert_that(!bad && worst <= 1e-15, bad ? cat("point ", *bad) : cat("gamma mismatch ", worst));
  }
  {
    auto& c = out.add("space.ball_structure",
                      "balls contain their centers, grow with the radius, and gamma_mass is additive on disjoint sets");
    std::string witness;
    double worst_additivity = 0.0;
    for (std::size_t k = 0; k < 10 * cfg.trials; ++k) {
      const PointIndex ctr = rng.index(space.size());
      const double r1 = space.diameter() * rng.uniform();
      const double r2 = r1 * (1.0 + rng.uniform());
      const auto small = ball_members(space, {ctr, std::max(r1, 1e-300)});
      const auto big = ball_members(space, {ctr, std::max(r2, 1e-300)});
      if (!std::binary_search(small.begin(), small.end(), ctr) ||
          !std::includes(big.begin(), big.end(), small.begin(), small.end()))
        witness = cat("ball (", ctr, ", ", r1, ")");
      std::vector<PointIndex> a, b;
      for (PointIndex i = 0; i < space.size(); ++i) (rng.uniform() < 0.5 ? a : b).push_back(i);
      const double total = gamma_mass(space, from_mask(PointMask(space.size(), 1)));
      worst_additivity = std::max(worst_additivity, detail::relative_gap(gamma_mass(space, a) + gamma_mass(space, b), total));
    }
    c.measure("samples", static_cast<double>(10 * cfg.trials)).measure("worst_additivity_error", worst_additivity);
    c.tolerance = 1e-12;
    c.assert_that(witness.empty() && worst_additivity <= 1e-12, witness.empty() ? "additivity" : witness);
  }
  {
    auto& c = out.add("space.geometric_doubling", "largest greedy packing of disjoint half-radius balls inside a sampled ball");
    std::size_t worst = 0;
    for (std::size_t k = 0; k < 5 * cfg.trials; ++k) {
      const Ball b = random_admissible_ball(space, rng, 5.0);
      worst = std::max(worst, half_ball_packing(space, b));
    }
    c.measure("max_half_ball_packing", static_cast<double>(worst));
  }
  {
    auto& c = out.add("space.mu_doubling", "doubling constant of the base measure over every ball of every radius");
    c.measure("D_mu", measure_mu_doubling(space, 2.0));
  }
  PlotSeries plot{"doubling_vs_alpha", {"alpha", "empirical_C_alpha_2", "bound"}, {}};
  for (double alpha : cfg.doubling_apertures) {
    const auto rep = verify_condition_A(space, alpha, 2.0);
    auto& c = out.add(cat("space.condition_A.alpha=", alpha),
                      "gamma(2B) <= C gamma(B) on every admissible ball, against the distance-function bound when available");
    c.measure("alpha", alpha)
        .measure("empirical_constant", rep.empirical_constant)
        .measure("balls_checked", static_cast<double>(rep.balls_checked))
        .measure("worst_center", static_cast<double>(rep.worst_ball.center))
        .measure("worst_radius", rep.worst_ball.radius);
    if (rep.theoretical_bound) {
      c.measure("measured_D_mu", *rep.measured_mu_doubling)
          .measure("bound_measured_D_mu", *rep.theoretical_bound)
          .measure("bound_nominal_D_mu_2", *rep.nominal_bound);
      c.assert_that(rep.pass, cat("ball (", rep.worst_ball.center, ", ", rep.worst_ball.radius, ") ratio ",
                                  rep.empirical_constant));
    }
    plot.rows.push_back({alpha, rep.empirical_constant,
                         rep.nominal_bound.value_or(std::numeric_limits<double>::quiet_NaN())});
  }
  out.plots.push_back(std::move(plot));

  std::optional<double> M;
  if (const auto* pp = std::get_if<PolynomialPotential>(&space.potential())) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (PointIndex i = 0; i < space.size(); ++i) {
      lo = std::min(lo, space.coords(i)[0]);
      hi = std::max(hi, space.coords(i)[0]);
    }
    const auto b = verify_condition_B(pp->poly, lo, hi);
    M = b.minimal_M;
    auto& c = out.add("space.condition_B", "smallest M with |phi''| <= M |phi'| where |phi'| > 1");
    c.measure("minimal_M", b.minimal_M).measure("argmax", b.argmax).measure("samples", static_cast<double>(b.samples));
    c.assert_that(b.violations.empty(), cat("non-finite ratio at x=", b.violations.empty() ? 0.0 : b.violations[0]));
  } else {
    auto& c = out.add("space.condition_B", "smallest M with |phi''| <= M |phi'| where |phi'| > 1");
    c.witness = "not applicable: potential is not a 1-D polynomial";
  }
  for (double alpha : {1.0, 2.0}) {
    const auto rep = verify_condition_C(space, alpha);
    auto& c = out.add(cat("space.condition_C.alpha=", alpha),
                      "max m(x)/m(y) over pairs with d(x,y) <= alpha m(x), against exp(M alpha) for polynomial potentials");
    c.measure("c_alpha", rep.c_alpha)
        .measure("pairs_checked", static_cast<double>(rep.pairs_checked))
        .measure("worst_x", static_cast<double>(rep.worst_pair.first))
        .measure("worst_y", static_cast<double>(rep.worst_pair.second));
    if (M) {
      c.measure("bound_exp_M_alpha", std::exp(*M * alpha));
      c.assert_that(rep.c_alpha <= std::exp(*M * alpha),
                    cat("pair (", rep.worst_pair.first, ", ", rep.worst_pair.second, ")"));
    }
  }
}

// ---------------------------------------------------------------------------
// tent geometry
// ---------------------------------------------------------------------------

inline void suite_tent(const SuiteContext& ctx, SuiteOutput& out) {
  using detail::cat;
  const auto& space = ctx.space();
  const auto& region = ctx.region;
  const auto& cfg = ctx.config;
  auto rng = ctx.rng(2);
  {
    auto& c = out.add("tent.region", "nodes are exactly the (y, t_l) with t_l < m(y), each with positive ball mass");
    std::optional<NodeIndex> bad;
    for (NodeIndex v = 0; v < region.size(); ++v)
      if (!(region.time(v) < space.m()[region.point(v)]) || !(region.ball_mass(v) > 0.0)) bad = bad.value_or(v);
    std::size_t expected = 0;
    for (PointIndex i = 0; i < space.size(); ++i)
      for (double t : region.time_grid().levels()) expected += t < space.m()[i];
    c.measure("nodes", static_cast<double>(region.size()))
        .measure("time_levels", static_cast<double>(region.time_grid().size()))
        .measure("t_min", region.time_grid().levels().front())
        .measure("t_max", region.max_time());
    c.assert_that(!bad && expected == region.size(), bad ? detail::node_label(region, *bad) : "node count mismatch");
  }
  {
    auto& c = out.add("tent.cone_monotone", "cones grow with the aperture and Gamma_1(x) holds every admissible level above x");
    std::string witness;
    for (std::size_t k = 0; k < cfg.trials && witness.empty(); ++k) {
      const PointIndex x = rng.index(space.size());
      for (auto [a, b] : {std::pair{0.5, 1.0}, std::pair{1.0, 2.0}, std::pair{1.0, 3.0}}) {
        const auto ca = cone(region, x, a);
        const auto cb = cone(region, x, b);
        if (!std::includes(cb.begin(), cb.end(), ca.begin(), ca.end())) witness = cat("x=", x, " apertures ", a, "<", b);
      }
      const auto c1 = cone(region, x, 1.0);
      for (std::size_t l = 0; l < region.levels_at(x); ++l)
        if (!std::binary_search(c1.begin(), c1.end(), region.node(x, l))) witness = cat("x=", x, " level ", l);
    }
    c.measure("points_sampled", static_cast<double>(cfg.trials));
    c.assert_that(witness.empty(), witness);
  }
  {
    auto& c = out.add("tent.definition_routes",
                      "D minus cones over the complement equals ball containment equals the distance-to-complement test");
    std::string witness;
    const auto all = from_mask(PointMask(space.size(), 1));
    if (!tent(region, {}).empty()) witness = "T(empty) is not empty";
    if (tent(region, all).size() != region.size()) witness = "T(X) is not all of D";
    double mean_size = 0.0;
    for (std::size_t k = 0; k < cfg.trials && witness.empty(); ++k) {
      const auto O = random_open_set(space, rng);
      const auto set = from_mask(O);
      const auto literal = tent(region, set);
      const auto contained = tent_by_containment(region, set);
      const auto fast = mask_to_nodes(tent_mask(region, O));
      mean_size += static_cast<double>(literal.size()) / static_cast<double>(cfg.trials);
      if (literal != contained || literal != fast) witness = cat("random set #", k, " (", set.size(), " points)");
    }
    c.measure("sets", static_cast<double>(cfg.trials)).measure("mean_tent_nodes", mean_size);
    c.assert_that(witness.empty(), witness);
  }
  {
    auto& c = out.add("tent.monotone", "O inside O' implies T(O) inside T(O')");
    std::string witness;
    for (std::size_t k = 0; k < cfg.trials && witness.empty(); ++k) {
      auto O = random_open_set(space, rng);
      auto bigger = O;
      for (auto& b : bigger)
        if (rng.uniform() < 0.2) b = 1;
      const auto a = mask_to_nodes(tent_mask(region, O));
      const auto b = mask_to_nodes(tent_mask(region, bigger));
      if (!std::includes(b.begin(), b.end(), a.begin(), a.end())) witness = cat("random set #", k);
    }
    c.assert_that(witness.empty(), witness);
  }
  {
    auto& c = out.add("tent.cone_meets_tent", "Gamma_1(x) meets T(O) only when x lies in O");
    std::string witness;
    std::size_t incidences = 0;
    for (std::size_t k = 0; k < cfg.trials && witness.empty(); ++k) {
      const auto O = random_open_set(space, rng);
      const auto tmask = tent_mask(region, O);
      for (std::size_t s = 0; s < 10 && witness.empty(); ++s) {
        const PointIndex x = rng.index(space.size());
        for (NodeIndex v : cone(region, x, 1.0)) {
          if (!tmask[v]) continue;
          ++incidences;
          if (!O[x]) {
            witness = cat("set #", k, " x=", x, " ", detail::node_label(region, v));
            break;
          }
        }
      }
    }
    c.measure("incidences", static_cast<double>(incidences));
    c.assert_that(witness.empty(), witness);
  }
  {
    // rho_B is the largest radius with the same point set as B; only the set
    // enters T(B).  Balls truncated by the edge of the cloud can carry tents
    // taller than rho_B, so apertures above 1 are measured, not asserted.
    auto& c = out.add("tent.cone_meets_ball_tent",
                      "Gamma_alpha(x) meets T(B) only when d(x, c_B) < alpha rho_B; asserted at alpha = 1");
    const std::size_t balls = 10 * cfg.trials;
    std::string witness;
    for (double alpha : {1.0, 1.5, 2.0, 3.0}) {
      std::size_t bad_rho = 0, bad_r = 0;
      for (std::size_t k = 0; k < balls; ++k) {
        const Ball B = random_admissible_ball(space, rng, 1.0 + 4.0 * rng.uniform());
        const std::size_t cnt = space.count_open(B.center, B.radius);
        const double rho =
            cnt < space.size() ? space.sorted_distances(B.center)[cnt] : std::numeric_limits<double>::infinity();
        PointMask inside(space.size(), 0);
        for (PointIndex z : space.ball_span(B)) inside[z] = 1;
        const auto tmask = tent_mask(region, inside);
        bool over_rho = false, over_r = false;
        for (NodeIndex v = 0; v < region.size() && !over_rho; ++v) {
          if (!tmask[v]) continue;
          for (PointIndex x : space.ball_span({region.point(v), alpha * region.time(v)})) {
            const double d = space.distance(x, B.center);
            over_r = over_r || !(d < alpha * B.radius);
            if (!(d < alpha * rho)) {
              over_rho = true;
              if (alpha == 1.0 && witness.empty())
                witness = cat("x=", x, " ", detail::node_label(region, v), " ball (", B.center, ", ", B.radius, ")");
              break;
            }
          }
        }
        bad_rho += over_rho;
        bad_r += over_r;
      }
      c.measure(cat("violations_rho.alpha=", alpha), static_cast<double>(bad_rho))
          .measure(cat("violations_r.alpha=", alpha), static_cast<double>(bad_r));
    }
    c.measure("balls_per_aperture", static_cast<double>(balls));
    c.assert_that(witness.empty(), witness);
  }
}

// ---------------------------------------------------------------------------
// functionals
// ---------------------------------------------------------------------------

inline void suite_functionals(const SuiteContext& ctx, SuiteOutput& out) {
  using detail::cat;
  const auto& space = ctx.space();
  const auto& region = ctx.region;
  const auto& cfg = ctx.config;
  auto rng = ctx.rng(3);
  for (const auto& [beta, alpha] : cfg.aperture_pairs) {
    auto& c = out.add(cat("functionals.aperture_identity.beta=", beta, ".alpha=", alpha),
                      "N_alpha J_beta f = gamma(B(y,beta t)) / gamma(B(y,alpha t)) J_alpha f entry by entry");
    double worst = 0.0;
    std::string witness;
    for (std::size_t k = 0; k < ctx.corpus.size(); ++k) {
      const auto& f = ctx.corpus[k];
      const auto lhs = n_alpha(j_alpha(region, f, beta), alpha);
      const auto ja = j_alpha(region, f, alpha);
      for (NodeIndex v = 0; v < region.size(); ++v) {
        const double ratio = region.ball_mass(v, beta) / region.ball_mass(v, alpha);
        auto l = lhs.row(v);
        auto r = ja.row(v);
        for (std::size_t e = 0; e < l.size(); ++e) {
          const double gap = detail::relative_gap(l[e], ratio * r[e]);
          if (gap > worst) {
            worst = gap;
            if (gap > 1e-12) witness = cat("f#", k, " ", detail::node_label(region, v), " entry ", e);
          }
        }
      }
    }
    c.measure("functions", static_cast<double>(ctx.corpus.size())).measure("worst_relative_error", worst);
    c.tolerance = 1e-12;
    c.assert_that(worst <= 1e-12, witness);
  }
  {
    auto& c = out.add("functionals.cylindrical_isometry", "||J_alpha f||_{L^p(L^q)} = ||f||_{t^{p,q}_alpha}");
    double worst = 0.0;
    for (const auto& f : ctx.corpus)
      for (double q : cfg.q)
        for (double alpha : {1.0, 2.0})
          worst = std::max(worst, detail::relative_gap(mixed_norm(j_alpha(region, f, alpha), cfg.p, q),
                                                       tpq_norm(region, f, cfg.p, q, alpha)));
    c.measure("worst_relative_error", worst);
    c.tolerance = 1e-10;
    c.assert_that(worst <= 1e-10, cat("relative gap ", worst));
  }
  {
    auto& c = out.add("functionals.fubini", "||f||_{t^{q,q}_alpha}^q computed by points equals the node-side sum");
    double worst = 0.0;
    for (const auto& f : ctx.corpus)
      for (double q : cfg.q)
        for (double alpha : {1.0, 3.0}) {
          const double by_points = std::pow(tpq_norm(region, f, q, q, alpha), q);
          worst = std::max(worst, detail::relative_gap(by_points, tqq_norm_power_nodewise(region, f, q, alpha)));
        }
    c.measure("worst_relative_error", worst);
    c.tolerance = 1e-10;
    c.assert_that(worst <= 1e-10, cat("relative gap ", worst));
  }
  {
    auto& c = out.add("functionals.aperture_ratio",
                      "||f||_{t^{p,q}_alpha} / ||f||_{t^{p,q}_1} over the corpus; never below 1 since cones grow");
    PlotSeries plot{"aperture_ratio", {"q", "alpha", "min_ratio", "max_ratio"}, {}};
    bool ok = true;
    for (double q : cfg.q)
      for (double alpha : {2.0, 3.0, 5.0}) {
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        for (const auto& f : ctx.corpus) {
          const double r = tpq_norm(region, f, cfg.p, q, alpha) / tpq_norm(region, f, cfg.p, q, 1.0);
          lo = std::min(lo, r);
          hi = std::max(hi, r);
        }
        ok = ok && lo >= 1.0 - 1e-12;
        c.measure(cat("max_ratio.q=", q, ".alpha=", alpha), hi);
        plot.rows.push_back({q, alpha, lo, hi});
      }
    c.assert_that(ok, "ratio below 1");
    out.plots.push_back(std::move(plot));
  }
  {
    auto& c = out.add("functionals.tinf_oracle",
                      "t^{inf,q'} supremum agrees with brute-force tent sums at its maximiser and dominates random balls");
    std::vector<TentFunction<double>> gs;
    for (std::size_t k = 0; k < cfg.test_functions; ++k) gs.push_back(random_dense_function(region, rng));
    std::string witness;
    double worst_gap = 0.0;
    for (double qp : {2.0, std::numeric_limits<double>::infinity()}) {
      const auto res = tinf_norms<double>(region, gs, qp);
      for (std::size_t k = 0; k < gs.size(); ++k) {
        const double at_max = tinf_ball_value(region, gs[k], qp, res[k].argmax);
        worst_gap = std::max(worst_gap, detail::relative_gap(at_max, res[k].value));
        for (std::size_t s = 0; s < cfg.trials; ++s) {
          const Ball b = random_admissible_ball(space, rng, 5.0);
          if (tinf_ball_value(region, gs[k], qp, b) > res[k].value * (1.0 + 1e-10))
            witness = cat("g#", k, " q'=", qp, " ball (", b.center, ", ", b.radius, ")");
        }
      }
    }
    c.measure("functions", static_cast<double>(gs.size())).measure("worst_maximiser_gap", worst_gap);
    c.tolerance = 1e-10;
    c.assert_that(witness.empty() && worst_gap <= 1e-10, witness.empty() ? "maximiser mismatch" : witness);
  }
}

// ---------------------------------------------------------------------------
// atomic decomposition
// ---------------------------------------------------------------------------

/// Sum a g gamma w over the atom's support.
inline double atom_pairing(const RegionGrid& region, const Atom<double>& a, const TentFunction<double>& g) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.support.size(); ++i) s += a.values[i] * g[a.support[i]] * region.weight(a.support[i]);
  return s;
}

inline void suite_atomic(const SuiteContext& ctx, SuiteOutput& out) {
  using detail::cat;
  const auto& space = ctx.space();
  const auto& region = ctx.region;
  const auto& cfg = ctx.config;
  auto rng = ctx.rng(4);
  {
    auto& c = out.add("atomic.cover_certificate",
                      "greedy balls are disjoint, 1-admissible, inside E, and their 5-dilates' tents cover T(E)");
    std::string witness;
    std::size_t max_balls = 0;
    for (std::size_t k = 0; k < cfg.trials; ++k) {
      const auto E = random_open_set(space, rng);
      const auto balls = vitali_tent_cover(space, E);
      const auto cert = certify_cover(region, E, balls);
      max_balls = std::max(max_balls, balls.size());
      if (!cert.pass() && witness.empty())
        witness = cat("set #", k, cert.uncovered_witness ? " " + detail::node_label(region, *cert.uncovered_witness) : "",
                      " disjoint=", cert.disjoint, " admissible=", cert.admissible, " inside=", cert.inside);
    }
    c.measure("sets", static_cast<double>(cfg.trials)).measure("max_balls", static_cast<double>(max_balls));
    c.assert_that(witness.empty(), witness);
  }

  const double C15 = verify_condition_A(space, 1.0, 5.0).empirical_constant;
  std::vector<TentFunction<double>> gs;
  for (std::size_t k = 0; k < cfg.test_functions; ++k) gs.push_back(random_dense_function(region, rng));

  double worst_recon = 0.0, worst_lambda_ratio = 0.0, worst_pw = 0.0, worst_dual = 0.0;
  double rho_min = std::numeric_limits<double>::infinity(), rho_max = 0.0, k3_max = 0.0, worst_rho_slack = 0.0;
  std::size_t atoms = 0, thresholds = 0, pairings = 0;
  std::string w_recon, w_atom, w_lambda, w_partition, w_pw, w_rho, w_dual;
  std::vector<double> rhos;
  for (double q : cfg.q) {
    const double qp = detail::dual_exponent(q);
    const auto tinf = tinf_norms<double>(region, gs, qp);
    for (std::size_t fi = 0; fi < ctx.corpus.size(); ++fi) {
      const auto& f = ctx.corpus[fi];
      const auto dec = atomic_decompose(region, f, q);
      const auto rec = reconstruct(dec, region.size());
      double fmax = 0.0, gap = 0.0;
      for (NodeIndex v = 0; v < region.size(); ++v) {
        fmax = std::max(fmax, std::abs(f[v]));
        gap = std::max(gap, std::abs(rec[v] - f[v]));
      }
      const double rel = fmax > 0.0 ? gap / fmax : gap;
      if (rel > worst_recon) worst_recon = rel;
      if (rel > 1e-10 && w_recon.empty()) w_recon = cat("f#", fi, " q=", q);
      if (!dec.report.partition_complete && w_partition.empty())
        w_partition = cat("f#", fi, " q=", q, " node ", dec.report.unassigned_witness.value_or(0));
      for (const auto& term : dec.terms) {
        ++atoms;
        const auto ar = validate_atom(region, term.atom);
        if (!ar.pass() && w_atom.empty()) w_atom = cat("f#", fi, " q=", q, " k=", term.k, " j=", term.j, ": ", ar.failure());
        const double cap = space.ball_mass(term.atom.ball) * std::ldexp(1.0, term.k + 1);
        worst_lambda_ratio = std::max(worst_lambda_ratio, term.lambda / cap);
        if (term.lambda > cap * (1.0 + 1e-12) && w_lambda.empty()) w_lambda = cat("f#", fi, " q=", q, " k=", term.k, " j=", term.j);
        for (std::size_t gi = 0; gi < gs.size(); ++gi) {
          ++pairings;
          const double lhs = std::abs(atom_pairing(region, term.atom, gs[gi]));
          const double ratio = tinf[gi].value > 0.0 ? lhs / tinf[gi].value : 0.0;
          worst_dual = std::max(worst_dual, ratio);
          if (lhs > tinf[gi].value * (1.0 + 1e-10) && w_dual.empty())
            w_dual = cat("f#", fi, " q=", q, " k=", term.k, " j=", term.j, " g#", gi);
        }
      }
      const auto a3 = a_q_alpha(region, f, q, 3.0);
      for (int k = dec.k_min; k <= dec.k_max; ++k) {
        ++thresholds;
        const auto pw = pointwise2_check(region, f, q, std::ldexp(1.0, k), a3);
        worst_pw = std::max(worst_pw, pw.worst_value / pw.lambda);
        if (!pw.pass && w_pw.empty()) w_pw = cat("f#", fi, " q=", q, " k=", k, " x=", pw.worst_x);
      }
      const double n1 = tpq_norm(region, f, 1.0, q, 1.0);
      const double k3 = tpq_norm(region, f, 1.0, q, 3.0) / n1;
      const double rho = dec.lambda_sum() / n1;
      rhos.push_back(rho);
      rho_min = std::min(rho_min, rho);
      rho_max = std::max(rho_max, rho);
      k3_max = std::max(k3_max, k3);
      const double bound = 4.0 * C15 * k3;
      worst_rho_slack = std::max(worst_rho_slack, rho / bound);
      if ((!std::isfinite(rho) || rho > bound) && w_rho.empty()) w_rho = cat("f#", fi, " q=", q, " rho=", rho);
    }
  }
  auto& rc = out.add("atomic.reconstruction", "sum of lambda a reproduces f");
  rc.measure("decompositions", static_cast<double>(ctx.corpus.size() * cfg.q.size())).measure("worst_relative_error", worst_recon);
  rc.tolerance = 1e-10;
  rc.assert_that(w_recon.empty(), w_recon);
  auto& ac = out.add("atomic.atoms", "every atom is supported in T(5B) with q-energy at most gamma(5B)^(1-q) and t^{1,q} norm at most 1");
  ac.measure("atoms", static_cast<double>(atoms));
  ac.tolerance = 1e-9;
  ac.assert_that(w_atom.empty(), w_atom);
  auto& lc = out.add("atomic.lambda_bound", "lambda_k^j <= gamma(5B_k^j) 2^(k+1)");
  lc.measure("worst_ratio", worst_lambda_ratio);
  lc.tolerance = 1e-12;
  lc.assert_that(w_lambda.empty(), w_lambda);
  auto& pc = out.add("atomic.partition", "every supported node belongs to exactly one (k, j) piece");
  pc.assert_that(w_partition.empty(), w_partition);
  auto& wc = out.add("atomic.pointwise2",
                     "A_q(f 1_{D \\ T(E)}) <= lambda with E = {A_q^3 f > lambda} at every threshold of every decomposition");
  wc.measure("thresholds", static_cast<double>(thresholds)).measure("worst_ratio", worst_pw);
  wc.tolerance = 1e-12;
  wc.assert_that(w_pw.empty(), w_pw);
  auto& nc = out.add("atomic.norm_equivalence",
                     "rho(f) = sum lambda / ||f||_{t^{1,q}} stays below 4 C_{1,5} K_3 with K_3 the aperture-3 norm ratio");
  nc.measure("rho_min", rho_min)
      .measure("rho_max", rho_max)
      .measure("C_1_5", C15)
      .measure("K3_max", k3_max)
      .measure("corpus_bound", 4.0 * C15 * k3_max)
      .measure("worst_rho_over_bound", worst_rho_slack);
  nc.assert_that(w_rho.empty(), w_rho);
  auto& dc = out.add("atomic.duality", "|<a, g>| <= ||g||_{t^{inf,q'}} for every atom and test function");
  dc.measure("pairings", static_cast<double>(pairings)).measure("worst_ratio", worst_dual);
  dc.tolerance = 1e-10;
  dc.assert_that(w_dual.empty(), w_dual);

  PlotSeries hist{"rho_histogram", {"bin_lo", "bin_hi", "count"}, {}};
  if (!rhos.empty() && rho_max > rho_min) {
    const std::size_t bins = 10;
    std::vector<double> counts(bins, 0.0);
    for (double r : rhos)
      counts[std::min(bins - 1, static_cast<std::size_t>((r - rho_min) / (rho_max - rho_min) * bins))] += 1.0;
    for (std::size_t b = 0; b < bins; ++b)
      hist.rows.push_back({rho_min + (rho_max - rho_min) * static_cast<double>(b) / bins,
                           rho_min + (rho_max - rho_min) * static_cast<double>(b + 1) / bins, counts[b]});
  } else if (!rhos.empty()) {
    hist.rows.push_back({rho_min, rho_max, static_cast<double>(rhos.size())});
  }
  out.plots.push_back(std::move(hist));
}

// ---------------------------------------------------------------------------
// dyadic
// ---------------------------------------------------------------------------

inline const std::vector<std::pair<std::string, std::string>>& dyadic_check_names() {
  static const std::vector<std::pair<std::string, std::string>> names = {
      {"dyadic.partition_nesting", "every generation partitions X into positive-mass cubes nested in the previous one"},
      {"dyadic.containment", "every 1-admissible ball lies in a cube of some shifted system; c_X and C~ measured"},
      {"dyadic.weak11", "gamma({M_D u > lambda}) <= ||u||_1 / lambda for every system"},
      {"dyadic.domination", "M_1 u <= C~ sum_D M_D u pointwise"},
      {"dyadic.local_weak11", "gamma({M_1 u > lambda}) <= C~ S^2 ||u||_1 / lambda with S systems"},
      {"dyadic.lattice_maximal", "||M_1 U||_{L^p(l^2)} / ||U||_{L^p(l^2)} for p in {1.5, 2, 4}"},
  };
  return names;
}

inline std::vector<double> lambda_grid(std::span<const double> maximal, std::size_t count = 10) {
  const double top = *std::max_element(maximal.begin(), maximal.end());
  std::vector<double> out;
  for (std::size_t j = 0; j < count; ++j) out.push_back(top * std::ldexp(1.0, -static_cast<int>(j) - 1) * 1.5);
  return out;
}

inline void suite_dyadic(const SuiteContext& ctx, SuiteOutput& out) {
  using detail::cat;
  const auto& space = ctx.space();
  const auto& cfg = ctx.config;
  if (!space.euclidean_dim()) {
    for (const auto& [n, p] : dyadic_check_names()) out.add(n, p).witness = "not applicable: no Euclidean embedding";
    return;
  }
  auto rng = ctx.rng(5);
  const auto systems = build_shifted_systems(space);
  const auto& names = dyadic_check_names();
  {
    auto& c = out.add(names[0].first, names[0].second);
    std::string witness;
    std::size_t generations = 0;
    for (const auto& sys : systems) {
      const auto a = audit_system(space, sys);
      generations = sys.generations.size();
      if (!(a.partition && a.nesting && a.positive_mass) && witness.empty())
        witness = cat(sys.label(), " partition=", a.partition, " nesting=", a.nesting, " mass=", a.positive_mass);
    }
    c.measure("systems", static_cast<double>(systems.size())).measure("generations", static_cast<double>(generations));
    c.assert_that(witness.empty(), witness);
  }
  const auto cont = ball_containment(space, systems, 1.0);
  {
    auto& c = out.add(names[1].first, names[1].second);
    c.measure("balls", static_cast<double>(cont.balls))
        .measure("contained", static_cast<double>(cont.contained))
        .measure("c_X", cont.c_X)
        .measure("C_tilde", cont.mass_constant);
    c.assert_that(cont.all_contained() && std::isfinite(cont.c_X),
                  cont.uncontained_witness
                      ? cat("ball (", cont.uncontained_witness->center, ", ", cont.uncontained_witness->radius, ")")
                      : "c_X not finite");
  }
  std::vector<std::vector<double>> us;
  for (std::size_t k = 0; k < std::max<std::size_t>(cfg.corpus_size, 1); ++k) us.push_back(random_point_function(space, rng));
  {
    auto& c = out.add(names[2].first, names[2].second);
    std::size_t checks = 0, violations = 0;
    double measured = 0.0;
    std::string witness;
    for (std::size_t k = 0; k < us.size(); ++k)
      for (const auto& sys : systems) {
        const auto md = dyadic_maximal(space, sys, us[k]);
        const auto grid = lambda_grid(md);
        const auto rep = weak11_check(space, sys, us[k], grid);
        checks += rep.checks;
        violations += rep.violations;
        measured = std::max(measured, rep.measured_constant);
        if (rep.violations && witness.empty()) witness = cat("u#", k, " ", sys.label());
      }
    c.measure("checks", static_cast<double>(checks)).measure("violations", static_cast<double>(violations)).measure("measured_constant", measured);
    c.tolerance = 1e-12;
    c.assert_that(violations == 0, witness);
  }
  {
    auto& c = out.add(names[3].first, names[3].second);
    double worst = 0.0;
    std::string witness;
    for (std::size_t k = 0; k < us.size(); ++k) {
      const auto rep = check_domination(space, systems, us[k], 1.0, cont.mass_constant);
      worst = std::max(worst, rep.worst_ratio);
      if (!rep.pass && witness.empty()) witness = cat("u#", k, " x=", rep.worst_x);
    }
    c.measure("C_tilde", cont.mass_constant).measure("worst_ratio", worst);
    c.tolerance = 1e-12;
    c.assert_that(witness.empty(), witness);
  }
  {
    auto& c = out.add(names[4].first, names[4].second);
    std::size_t violations = 0;
    double measured = 0.0;
    std::string witness;
    for (std::size_t k = 0; k < us.size(); ++k) {
      const auto m1 = local_maximal(space, us[k], 1.0);
      const auto rep = weak11_check_local(space, systems.size(), cont.mass_constant, us[k], 1.0, lambda_grid(m1));
      violations += rep.violations;
      measured = std::max(measured, rep.measured_constant);
      if (rep.violations && witness.empty()) witness = cat("u#", k);
    }
    c.measure("measured_constant", measured)
        .measure("allowed_constant", cont.mass_constant * static_cast<double>(systems.size() * systems.size()));
    c.assert_that(violations == 0, witness);
  }
  {
    auto& c = out.add(names[5].first, names[5].second);
    PlotSeries plot{"lattice_maximal", {"p", "max_ratio"}, {}};
    for (double p : {1.5, 2.0, 4.0}) {
      double worst = 0.0;
      for (std::size_t k = 0; k < std::min<std::size_t>(cfg.trials, 10); ++k) {
        LatticeField U{space.size(), std::vector<double>(4, 1.0), std::vector<double>(space.size() * 4, 0.0)};
        for (std::size_t s = 0; s < 4; ++s) {
          const auto u = random_point_function(space, rng);
          for (PointIndex x = 0; x < space.size(); ++x) U.at(x, s) = u[x];
        }
        const auto MU = lattice_maximal(space, U, 1.0);
        worst = std::max(worst, lattice_norm(space, MU, p, 2.0) / lattice_norm(space, U, p, 2.0));
      }
      c.measure(cat("max_ratio.p=", p), worst);
      plot.rows.push_back({p, worst});
    }
    out.plots.push_back(std::move(plot));
  }
}

// ---------------------------------------------------------------------------
// cone covering
// ---------------------------------------------------------------------------

inline const std::vector<std::pair<std::string, std::string>>& cone_check_names() {
  static const std::vector<std::pair<std::string, std::string>> names = {
      {"cone.parameters", "beta = c_1 (comparability at aperture 1 stands in for the undefined condition of the second case), alpha = 2 beta c_{2beta}, lambda = 0.5 / A_beta"},
      {"cone.direction_net", "every unit vector is within arctan(1/4) of a net direction"},
      {"cone.sector_oracle", "closed-form sector membership agrees with a dense scan of s"},
      {"cone.extension", "ball-union and maximal-function routes to E* agree; gamma(E*) <= C~_alpha S^2 gamma(E) / lambda"},
      {"cone.cover_certificate", "Gamma(x) \\ T(E*) lies in the union of the Gamma(x_m)"},
      {"cone.corollary_pointwise", "A_q(f 1_{D \\ T(E*)}) <= N lambda with E = {A_q f > lambda}"},
      {"cone.lda_standalone", "y in R(v,t) inside E with t <= beta m(x) forces B(y, 2t) inside E*"},
      {"cone.topcor_selftest", "d(y,z) <= d(x,z) tan(theta) for right-angle and equal-distance planar triangles"},
      {"cone.divergence_selftest", "rays at angle <= arctan(1/4) stay within t/4 at time t"},
      {"cone.cover_certificate_stress", "cover certificate with lambda = 1/2, outside the proven range, so E* stays proper"},
  };
  return names;
}

inline void suite_cone_cover(const SuiteContext& ctx, SuiteOutput& out) {
  using detail::cat;
  const auto& space = ctx.space();
  const auto& region = ctx.region;
  const auto& cfg = ctx.config;
  const auto& names = cone_check_names();
  const auto dim = space.euclidean_dim();
  if (!dim || *dim > 2) {
    for (const auto& [n, p] : names) out.add(n, p).witness = "not applicable: needs a Euclidean space of dimension 1 or 2";
    return;
  }
  auto rng = ctx.rng(6);
  const auto params = lda_params(space);
  const auto net = direction_net(*dim);
  {
    auto& c = out.add(names[0].first, names[0].second);
    c.measure("beta", params.beta)
        .measure("c_beta", params.c_beta)
        .measure("c_2beta", params.c_2beta)
        .measure("alpha", params.alpha)
        .measure("A_beta", params.A_beta)
        .measure("lambda", params.lambda);
  }
  {
    auto& c = out.add(names[1].first, names[1].second);
    const double limit = std::atan(0.25);
    double worst = 0.0;
    const std::size_t samples = 10000;
    for (std::size_t k = 0; k < samples; ++k) {
      std::vector<double> u(*dim);
      if (*dim == 1) {
        u[0] = rng.uniform() < 0.5 ? 1.0 : -1.0;
      } else {
        const double a = 2.0 * std::numbers::pi * rng.uniform();
        u = {std::cos(a), std::sin(a)};
      }
      double best = std::numbers::pi;
      for (const auto& v : net) best = std::min(best, std::acos(std::clamp(detail::dot(u, v), -1.0, 1.0)));
      worst = std::max(worst, best);
    }
    c.measure("directions", static_cast<double>(net.size())).measure("worst_angle", worst).measure("max_angle", limit);
    c.assert_that(worst <= limit, cat("angle ", worst));
  }
  {
    auto& c = out.add(names[2].first, names[2].second);
    std::size_t robust_mismatch = 0, members = 0;
    const std::size_t grid = 4000;
    for (std::size_t k = 0; k < cfg.trials; ++k) {
      const PointIndex x = rng.index(space.size());
      const auto& v = net[rng.index(net.size())];
      const double t = space.m()[x] * (0.1 + 2.0 * rng.uniform());
      const auto closed = to_mask(space.size(), sector_members(space, {x, v, t}));
      for (PointIndex p = 0; p < space.size(); ++p) {
        const auto u = detail::diff(space.coords(p), space.coords(x));
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s <= grid; ++s) {
          const double ss = t * static_cast<double>(s) / grid;
          std::vector<double> w(u.size());
          for (std::size_t d = 0; d < u.size(); ++d) w[d] = u[d] - ss * v[d];
          best = std::min(best, std::sqrt(detail::dot(w, w)) - ss / 4.0);
        }
        members += closed[p];
        const bool scanned = best < 0.0;
        // A dense scan can miss members only by a margin of order t / grid.
        if (scanned != static_cast<bool>(closed[p]) && !(closed[p] && best < 2.0 * t / grid)) ++robust_mismatch;
      }
    }
    c.measure("members", static_cast<double>(members)).measure("mismatches", static_cast<double>(robust_mismatch));
    c.assert_that(robust_mismatch == 0, cat(robust_mismatch, " mismatches"));
  }
  const auto cont = ball_containment(space, build_shifted_systems(space), params.alpha);
  const double S = std::pow(3.0, static_cast<double>(*dim));
  {
    auto& c = out.add(names[3].first, names[3].second);
    std::string witness;
    double worst = 0.0;
    const auto empty = extension(space, PointMask(space.size(), 0), params);
    const auto full = extension(space, PointMask(space.size(), 1), params);
    if (empty.mass != 0.0) witness = "E = empty gives nonempty E*";
    if (std::count(full.set.begin(), full.set.end(), char{1}) != static_cast<long>(space.size())) witness = "E = X gives E* != X";
    const double allowed = cont.mass_constant * S * S;
    for (std::size_t k = 0; k < cfg.trials; ++k) {
      const auto E = random_open_set(space, rng);
      const auto ext = extension(space, E, params);
      if (!ext.routes_agree && witness.empty()) witness = cat("set #", k, ": routes disagree");
      worst = std::max(worst, ext.measured_constant);
      if (ext.measured_constant > allowed * (1.0 + 1e-12) && witness.empty()) witness = cat("set #", k, ": weak bound");
    }
    c.measure("measured_constant", worst).measure("allowed_constant", allowed);
    c.assert_that(witness.empty(), witness);
  }
  {
    auto& c = out.add(names[4].first, names[4].second);
    std::size_t vacuous = 0, nodes_outside = 0, missing = 0, done = 0;
    std::string witness;
    for (std::size_t k = 0; done < cfg.trials && k < 20 * cfg.trials; ++k) {
      const auto E = random_open_set(space, rng);
      if (!detail::nonempty_proper(E)) continue;
      const auto members = from_mask(E);
      const PointIndex x = members[rng.index(members.size())];
      const auto ext = extension(space, E, params);
      const auto cert = cone_cover(region, E, ext.set, x);
      ++done;
      vacuous += cert.vacuous();
      nodes_outside += cert.outside_tent;
      for (const auto& xm : cert.x_m) missing += !xm;
      if (!cert.pass() && witness.empty()) witness = cat("trial ", k, " x=", x, " ", detail::node_label(region, *cert.uncovered_witness));
    }
    c.measure("trials", static_cast<double>(done))
        .measure("directions", static_cast<double>(net.size()))
        .measure("vacuous_fraction", done ? static_cast<double>(vacuous) / static_cast<double>(done) : 0.0)
        .measure("nodes_outside_tent", static_cast<double>(nodes_outside))
        .measure("directions_without_contact", static_cast<double>(missing));
    c.assert_that(witness.empty(), witness);
  }
  {
    auto& c = out.add(names[5].first, names[5].second);
    double worst = 0.0;
    std::size_t runs = 0;
    std::string witness;
    for (double q : cfg.q)
      for (std::size_t fi = 0; fi < std::min(ctx.corpus.size(), cfg.trials); ++fi) {
        const auto a1 = a_q_alpha(region, ctx.corpus[fi], q, 1.0);
        const double top = *std::max_element(a1.begin(), a1.end());
        for (int j = 1; j <= 4; ++j) {
          const auto rep = corollary_pointwise_check(region, ctx.corpus[fi], q, top * std::ldexp(1.0, -j), params, a1);
          ++runs;
          worst = std::max(worst, rep.worst_value / rep.lambda);
          if (!rep.pass && witness.empty()) witness = cat("f#", fi, " q=", q, " x=", rep.worst_x);
        }
      }
    c.measure("runs", static_cast<double>(runs))
        .measure("worst_ratio_to_lambda", worst)
        .measure("allowed_ratio", static_cast<double>(net.size()));
    c.tolerance = 1e-12;
    c.assert_that(witness.empty(), witness);
  }
  {
    auto& c = out.add(names[6].first, names[6].second);
    const auto rep = lda_check(space, params, cfg.trials, rng);
    c.measure("trials", static_cast<double>(rep.trials))
        .measure("nonempty_sectors", static_cast<double>(rep.nonempty))
        .measure("violations", static_cast<double>(rep.violations));
    c.assert_that(rep.pass(), cat("y=", rep.witness.value_or(0)));
  }
  {
    auto& c = out.add(names[7].first, names[7].second);
    const auto rep = topcor_selftest(1000, rng);
    c.measure("samples", static_cast<double>(rep.samples)).measure("worst_excess", rep.worst_excess);
    c.tolerance = 1e-12;
    c.assert_that(rep.pass, cat("excess ", rep.worst_excess));
  }
  {
    auto& c = out.add(names[8].first, names[8].second);
    const auto rep = divergence_selftest(1000, rng);
    c.measure("samples", static_cast<double>(rep.samples)).measure("worst_excess", rep.worst_excess);
    c.tolerance = 1e-12;
    c.assert_that(rep.pass, cat("excess ", rep.worst_excess));
  }
  {
    auto& c = out.add(names[9].first, names[9].second);
    std::size_t done = 0, failed = 0, vacuous = 0, uncovered = 0;
    for (std::size_t k = 0; done < cfg.trials && k < 20 * cfg.trials; ++k) {
      const auto E = random_open_set(space, rng);
      if (!detail::nonempty_proper(E)) continue;
      const auto members = from_mask(E);
      const PointIndex x = members[rng.index(members.size())];
      const auto ext = extension(space, E, params.alpha, 0.5);
      const auto cert = cone_cover(region, E, ext.set, x);
      ++done;
      vacuous += cert.vacuous();
      failed += !cert.pass();
      uncovered += cert.outside_tent;
    }
    c.measure("trials", static_cast<double>(done))
        .measure("vacuous_fraction", done ? static_cast<double>(vacuous) / static_cast<double>(done) : 0.0)
        .measure("failed_fraction", done ? static_cast<double>(failed) / static_cast<double>(done) : 0.0)
        .measure("cone_nodes_outside_tent", static_cast<double>(uncovered));
  }
}

// ---------------------------------------------------------------------------
// orchestration
// ---------------------------------------------------------------------------

struct SuiteEntry {
  const char* name;
  bool SuiteSelection::*flag;
  void (*run)(const SuiteContext&, SuiteOutput&);
};

inline const std::vector<SuiteEntry>& suite_table() {
  static const std::vector<SuiteEntry> table = {
      {"space", &SuiteSelection::space, &suite_space},
      {"tent", &SuiteSelection::tent, &suite_tent},
      {"functionals", &SuiteSelection::functionals, &suite_functionals},
      {"atomic", &SuiteSelection::atomic, &suite_atomic},
      {"dyadic", &SuiteSelection::dyadic, &suite_dyadic},
      {"cone_cover", &SuiteSelection::cone_cover, &suite_cone_cover},
  };
  return table;
}

/// Runs the selected suites.  Output order is fixed by the suite table, so
/// parallel runs give the same report.  Wall times go to the log only.
inline CertificationReport run_suite(const ScenarioConfig& config) {
  validate_config(config);
  const auto ctx = make_context(config);
  CertificationReport report;
  report.scenario = scenario_json(config);
  report.scenario["space_name"] = ctx.named.name;
  report.scenario["points"] = ctx.space().size();
  report.scenario["region_nodes"] = ctx.region.size();
  std::vector<SuiteOutput> outputs(suite_table().size());
  auto run_one = [&](std::size_t i) {
    const auto start = std::chrono::steady_clock::now();
    suite_table()[i].run(ctx, outputs[i]);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    log(LogLevel::info, detail::cat("suite ", suite_table()[i].name, ": ", outputs[i].checks.size(), " checks in ", secs, " s"));
  };
  std::vector<std::size_t> selected;
  for (std::size_t i = 0; i < suite_table().size(); ++i)
    if (config.suites.*(suite_table()[i].flag)) selected.push_back(i);
  if (config.parallel) {
    std::vector<std::future<void>> futures;
    for (std::size_t i : selected) futures.push_back(std::async(std::launch::async, run_one, i));
    for (auto& f : futures) f.get();
  } else {
    for (std::size_t i : selected) run_one(i);
  }
  for (std::size_t i : selected) {
    for (auto& c : outputs[i].checks) report.checks.push_back(std::move(c));
    for (auto& p : outputs[i].plots) report.plots.push_back(std::move(p));
  }
  return report;
}

}  // namespace tentlab

#endif  // TENTLAB_SUITE_HPP
