#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tentlab/tentlab.hpp"

using namespace tentlab;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct Globals {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::string format;
  bool parallel = false;
  std::string space;
};

ScenarioConfig base_config(const Globals& g) {
  ScenarioConfig c;
  if (!g.config_path.empty()) c = config_from_json(read_json_file(g.config_path));
  if (!g.space.empty()) {
    if (std::filesystem::exists(g.space)) {
      c.space_file = g.space;
    } else {
      c.space_file.clear();
      c.space_preset = g.space;
    }
  }
  if (g.seed) c.seed = *g.seed;
  if (!g.out_dir.empty()) c.out_dir = g.out_dir;
  if (g.format == "csv") c.format = ReportFormat::csv;
  else if (g.format == "json") c.format = ReportFormat::json;
  if (g.parallel) c.parallel = true;
  validate_config(c);
  return c;
}

ScenarioConfig only(ScenarioConfig c, bool SuiteSelection::*flag) {
  c.suites = {false, false, false, false, false, false};
  c.suites.*flag = true;
  return c;
}

void print_checks(const CertificationReport& r) {
  for (const auto& c : r.checks) {
    std::cout << to_string(c.status) << '\t' << c.name;
    for (const auto& [k, v] : c.measured) std::cout << ' ' << k << '=' << v;
    if (!c.witness.empty()) std::cout << "  [" << c.witness << ']';
    std::cout << '\n';
  }
  std::cout << (r.all_pass() ? "PASS" : "FAIL") << ": " << r.checks.size() << " checks, " << r.failures()
            << " failed\n";
}

int finish(const CertificationReport& r, const ScenarioConfig& c) {
  for (const auto& p : emit_report(r, c.out_dir, c.format)) log(LogLevel::info, "wrote " + p.string());
  print_checks(r);
  return r.all_pass() ? kExitPass : kExitFail;
}

CertificationReport keep_prefix(CertificationReport r, const std::vector<std::string>& names) {
  std::vector<CheckRecord> kept;
  for (auto& c : r.checks)
    for (const auto& n : names)
      if (c.name.rfind(n, 0) == 0) {
        kept.push_back(std::move(c));
        break;
      }
  r.checks = std::move(kept);
  return r;
}

TentFunction<double> load_or_generate(const SuiteContext& ctx, const std::string& path, std::size_t index) {
  if (!path.empty()) return load_function_csv(path, ctx.region.size());
  if (index >= ctx.corpus.size()) throw ParseError("--index: corpus has " + std::to_string(ctx.corpus.size()) + " functions");
  return ctx.corpus[index];
}

int cmd_norms(const ScenarioConfig& cfg, const std::string& function, std::size_t index, std::vector<double> alphas) {
  const auto ctx = make_context(cfg);
  const auto f = load_or_generate(ctx, function, index);
  CertificationReport r;
  r.scenario = scenario_json(cfg);
  auto& c = r.add("norms.values", "tent-space norms of the selected function");
  PlotSeries plot{"norms", {"p", "q", "alpha", "norm"}, {}};
  double worst = 0.0;
  for (double q : cfg.q)
    for (double alpha : alphas) {
      const double n = tpq_norm(ctx.region, f, cfg.p, q, alpha);
      c.measure(detail::cat("t_p_q.q=", q, ".alpha=", alpha), n);
      plot.rows.push_back({cfg.p, q, alpha, n});
      worst = std::max(worst, detail::relative_gap(n, mixed_norm(j_alpha(ctx.region, f, alpha), cfg.p, q)));
    }
  c.measure("isometry_relative_error", worst);
  c.tolerance = 1e-10;
  c.assert_that(worst <= 1e-10, "J_alpha isometry");
  r.plots.push_back(std::move(plot));
  return finish(r, cfg);
}

int cmd_decompose(const ScenarioConfig& cfg, const std::string& function, std::size_t index, bool validate) {
  const auto ctx = make_context(cfg);
  const auto f = load_or_generate(ctx, function, index);
  CertificationReport r;
  r.scenario = scenario_json(cfg);
  for (double q : cfg.q) {
    const auto dec = atomic_decompose(ctx.region, f, q);
    const auto rec = reconstruct(dec, ctx.region.size());
    double fmax = 0.0, gap = 0.0;
    for (NodeIndex v = 0; v < ctx.region.size(); ++v) {
      fmax = std::max(fmax, std::abs(f[v]));
      gap = std::max(gap, std::abs(rec[v] - f[v]));
    }
    auto& c = r.add(detail::cat("decompose.q=", q), "sum of lambda a reproduces f and the pieces partition its support");
    const double n1 = tpq_norm(ctx.region, f, 1.0, q, 1.0);
    c.measure("terms", static_cast<double>(dec.terms.size()))
        .measure("k_min", dec.k_min)
        .measure("k_max", dec.k_max)
        .measure("lambda_sum", dec.lambda_sum())
        .measure("t_1_q_norm", n1)
        .measure("rho", dec.lambda_sum() / n1)
        .measure("reconstruction_error", fmax > 0.0 ? gap / fmax : gap);
    c.tolerance = 1e-10;
    c.assert_that(dec.report.partition_complete && gap <= 1e-10 * std::max(fmax, 1.0), "reconstruction or partition");
    PlotSeries terms{detail::cat("terms_q", q), {"k", "j", "lambda", "center", "radius", "support"}, {}};
    for (const auto& t : dec.terms)
      terms.rows.push_back({static_cast<double>(t.k), static_cast<double>(t.j), t.lambda,
                            static_cast<double>(t.atom.ball.center), t.atom.ball.radius,
                            static_cast<double>(t.atom.support.size())});
    r.plots.push_back(std::move(terms));
    if (!validate) continue;
    auto& a = r.add(detail::cat("verify_atoms.q=", q), "support in T(5B), q-energy at most gamma(5B)^(1-q), t^{1,q} norm at most 1");
    std::string witness;
    double worst_energy = 0.0;
    for (const auto& t : dec.terms) {
      const auto ar = validate_atom(ctx.region, t.atom);
      worst_energy = std::max(worst_energy, ar.energy / ar.energy_bound);
      if (!ar.pass() && witness.empty()) witness = detail::cat("k=", t.k, " j=", t.j, ": ", ar.failure());
    }
    a.measure("atoms", static_cast<double>(dec.terms.size())).measure("worst_energy_ratio", worst_energy);
    a.tolerance = 1e-9;
    a.assert_that(witness.empty(), witness);
  }
  return finish(r, cfg);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tentlab: tent spaces on finite weighted metric measure spaces"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config_path, "Scenario config (JSON)")->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--out", g.out_dir, "Output directory");
  app.add_option("--format", g.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  app.add_flag("--parallel", g.parallel, "Run suites concurrently");
  app.add_option("--space", g.space, "Preset name or space file");

  auto* space = app.add_subcommand("space", "Certify the space: metric, weights, conditions A, B, C");
  auto* region = app.add_subcommand("region", "Build the region and check cone/tent identities");

  std::string function;
  std::size_t index = 0;
  std::vector<double> alphas = {1.0, 2.0, 3.0};
  auto* norms = app.add_subcommand("norms", "Tent-space norms of one function");
  auto* decompose = app.add_subcommand("decompose", "Atomic decomposition of one function");
  auto* verify = app.add_subcommand("verify-atoms", "Decompose and validate every atom");
  for (auto* sub : {norms, decompose, verify}) {
    sub->add_option("--function", function, "CSV with node,value rows")->check(CLI::ExistingFile);
    sub->add_option("--index", index, "Corpus member used when no file is given");
  }
  norms->add_option("--alpha", alphas, "Apertures");

  double alpha = 1.0;
  std::string op = "dyadic";
  bool maximal_report = false;
  auto* maximal = app.add_subcommand("maximal", "Dyadic, local and lattice maximal functions");
  maximal->add_option("--alpha", alpha, "Aperture")->check(CLI::PositiveNumber);
  maximal->add_option("--op", op, "Operator")->check(CLI::IsMember({"dyadic", "local", "lattice"}));
  maximal->add_flag("--report", maximal_report, "Write the report to --out");

  std::optional<std::uint64_t> set_seed;
  std::size_t trials = 0;
  bool cone_report = false;
  auto* conecover = app.add_subcommand("conecover", "Cone covering certificates");
  conecover->add_option("--space", g.space, "Preset name or space file");
  conecover->add_option("--set-seed", set_seed, "Seed for the random sets");
  conecover->add_option("--trials", trials, "Number of (E, x) pairs");
  conecover->add_flag("--report", cone_report, "Write the report to --out");

  auto* suite = app.add_subcommand("suite", "Run every selected suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    auto cfg = base_config(g);
    if (*space) return finish(run_suite(only(cfg, &SuiteSelection::space)), cfg);
    if (*region) return finish(run_suite(only(cfg, &SuiteSelection::tent)), cfg);
    if (*norms) return cmd_norms(cfg, function, index, alphas);
    if (*decompose) return cmd_decompose(cfg, function, index, false);
    if (*verify) return cmd_decompose(cfg, function, index, true);
    if (*maximal) {
      if (alpha != 1.0) log(LogLevel::info, "maximal: suite checks use aperture 1; --alpha applies to the profile");
      auto r = run_suite(only(cfg, &SuiteSelection::dyadic));
      std::vector<std::string> keep = {"dyadic.partition_nesting"};
      if (op == "dyadic") keep.insert(keep.end(), {"dyadic.weak11"});
      if (op == "local") keep.insert(keep.end(), {"dyadic.containment", "dyadic.domination", "dyadic.local_weak11"});
      if (op == "lattice") keep.insert(keep.end(), {"dyadic.lattice_maximal"});
      r = keep_prefix(std::move(r), keep);
      const auto ctx = make_context(cfg);
      Rng rng(cfg.seed);
      const auto u = random_point_function(ctx.space(), rng);
      const auto m = local_maximal(ctx.space(), u, alpha);
      PlotSeries profile{"maximal_profile", {"point", "u", "M_alpha_u"}, {}};
      for (PointIndex x = 0; x < ctx.space().size(); ++x) profile.rows.push_back({static_cast<double>(x), u[x], m[x]});
      r.plots.push_back(std::move(profile));
      if (!maximal_report) {
        print_checks(r);
        return r.all_pass() ? kExitPass : kExitFail;
      }
      return finish(r, cfg);
    }
    if (*conecover) {
      if (set_seed) cfg.seed = *set_seed;
      if (trials) cfg.trials = trials;
      if (g.space.empty() && g.config_path.empty()) cfg.space_preset = "gaussian_plane";
      auto r = run_suite(only(cfg, &SuiteSelection::cone_cover));
      if (!cone_report) {
        print_checks(r);
        return r.all_pass() ? kExitPass : kExitFail;
      }
      return finish(r, cfg);
    }
    if (*suite) return finish(run_suite(cfg), cfg);
  } catch (const ParseError& e) {
    std::cerr << "tentlab: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "tentlab: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
