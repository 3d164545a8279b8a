// Acceptance gate: one line per criterion, exit status 0 only when all pass.
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "tentlab/tentlab.hpp"

using namespace tentlab;

namespace {

struct Verdict {
  bool pass = true;
  std::ostringstream detail;
};

ScenarioConfig scenario(const std::string& preset, SuiteSelection suites) {
  ScenarioConfig c;
  c.space_preset = preset;
  c.suites = suites;
  return c;
}

constexpr SuiteSelection kSpace{true, false, false, false, false, false};
constexpr SuiteSelection kFunctionals{false, false, true, false, false, false};
constexpr SuiteSelection kAtomic{false, false, false, true, false, false};
constexpr SuiteSelection kDyadic{false, false, false, false, true, false};
constexpr SuiteSelection kCone{false, false, false, false, false, true};

const std::vector<std::string> kSpaces = {"gaussian_line", "gaussian_plane", "uniform_local"};

double value(const CheckRecord& c, const std::string& key) {
  for (const auto& [k, v] : c.measured)
    if (k == key) return v;
  return std::numeric_limits<double>::quiet_NaN();
}

// Requires the named check to exist and pass; appends its witness otherwise.
const CheckRecord* require(Verdict& v, const CertificationReport& r, const std::string& name, const std::string& where) {
  const auto* c = r.find(name);
  if (!c) {
    v.pass = false;
    v.detail << " [" << where << " " << name << " missing]";
    return nullptr;
  }
  if (c->status != CheckStatus::pass) {
    v.pass = false;
    v.detail << " [" << where << " " << name << " " << to_string(c->status) << ": " << c->witness << "]";
  }
  return c;
}

Verdict doubling() {
  Verdict v;
  const auto r = run_suite(scenario("gaussian_line", kSpace));
  for (double alpha : {0.5, 1.0, 2.0, 5.0}) {
    const auto* c = require(v, r, detail::cat("space.condition_A.alpha=", alpha), "gaussian_line");
    if (!c) continue;
    const double emp = value(*c, "empirical_constant");
    const double bound = 2.0 * std::exp(alpha * (5.0 * alpha + 6.0) / 2.0);
    if (!(emp <= bound)) v.pass = false;
    v.detail << " alpha=" << alpha << ": " << emp << " <= " << bound << " (" << value(*c, "balls_checked") << " balls);";
  }
  return v;
}

Verdict polynomial_comparability() {
  Verdict v;
  for (const char* preset : {"quartic", "gaussian_polynomial"}) {
    const auto r = run_suite(scenario(preset, kSpace));
    const auto* b = require(v, r, "space.condition_B", preset);
    const double M = b ? value(*b, "minimal_M") : std::numeric_limits<double>::quiet_NaN();
    v.detail << ' ' << preset << " M=" << M;
    for (double alpha : {1.0, 2.0}) {
      const auto* c = require(v, r, detail::cat("space.condition_C.alpha=", alpha), preset);
      if (c) v.detail << " c_" << alpha << "=" << value(*c, "c_alpha") << "<=" << std::exp(M * alpha);
    }
    v.detail << ';';
  }
  return v;
}

Verdict aperture_identity() {
  Verdict v;
  for (const auto& s : kSpaces) {
    auto c = scenario(s, kFunctionals);
    c.corpus_size = 20;
    const auto r = run_suite(c);
    double worst = 0.0;
    for (const auto& [beta, alpha] : c.aperture_pairs)
      if (const auto* rec = require(v, r, detail::cat("functionals.aperture_identity.beta=", beta, ".alpha=", alpha), s))
        worst = std::max(worst, value(*rec, "worst_relative_error"));
    v.detail << ' ' << s << " worst=" << worst << ';';
  }
  return v;
}

// Criteria 4 to 8 share the atomic suite at full corpus scale.
std::vector<CertificationReport>& atomic_reports() {
  static std::vector<CertificationReport> reports = [] {
    std::vector<CertificationReport> out;
    for (const auto& s : kSpaces) {
      auto c = scenario(s, kAtomic);
      c.corpus_size = 100;
      c.trials = 100;
      c.test_functions = 20;
      c.q = {1.0, 2.0};
      out.push_back(run_suite(c));
    }
    return out;
  }();
  return reports;
}

Verdict atomic_checks(const std::vector<std::string>& names, const std::vector<std::string>& keys) {
  Verdict v;
  for (std::size_t i = 0; i < kSpaces.size(); ++i) {
    v.detail << ' ' << kSpaces[i];
    for (const auto& n : names)
      if (const auto* c = require(v, atomic_reports()[i], n, kSpaces[i]))
        for (const auto& k : keys)
          if (!std::isnan(value(*c, k))) v.detail << ' ' << k << '=' << value(*c, k);
    v.detail << ';';
  }
  return v;
}

Verdict dyadic_systems() {
  Verdict v;
  for (const auto& s : kSpaces) {
    auto c = scenario(s, kDyadic);
    c.corpus_size = 200;
    const auto r = run_suite(c);
    v.detail << ' ' << s;
    require(v, r, "dyadic.partition_nesting", s);
    if (const auto* w = require(v, r, "dyadic.weak11", s))
      v.detail << " weak11 checks=" << value(*w, "checks") << " violations=" << value(*w, "violations");
    if (const auto* ct = require(v, r, "dyadic.containment", s))
      v.detail << " contained=" << value(*ct, "contained") << "/" << value(*ct, "balls") << " c_X=" << value(*ct, "c_X")
               << " C~=" << value(*ct, "C_tilde");
    if (const auto* d = require(v, r, "dyadic.domination", s)) v.detail << " domination_ratio=" << value(*d, "worst_ratio");
    v.detail << ';';
  }
  return v;
}

Verdict cone_covering() {
  Verdict v;
  auto c = scenario("gaussian_plane", kCone);
  c.trials = 50;
  const auto r = run_suite(c);
  if (const auto* p = require(v, r, "cone.cover_certificate", "gaussian_plane"))
    v.detail << " certificates=" << value(*p, "trials") << " directions=" << value(*p, "directions")
             << " vacuous_fraction=" << value(*p, "vacuous_fraction");
  if (const auto* p = require(v, r, "cone.corollary_pointwise", "gaussian_plane"))
    v.detail << " corollary worst/lambda=" << value(*p, "worst_ratio_to_lambda") << "<=" << value(*p, "allowed_ratio");
  for (const char* n : {"cone.topcor_selftest", "cone.divergence_selftest"})
    if (const auto* p = require(v, r, n, "gaussian_plane")) v.detail << ' ' << n << " excess=" << value(*p, "worst_excess");
  if (const auto* p = r.find("cone.cover_certificate_stress"))
    v.detail << " stress vacuous=" << value(*p, "vacuous_fraction") << " failed=" << value(*p, "failed_fraction");
  if (value(*r.find("cone.cover_certificate"), "trials") < 50.0) v.pass = false;
  return v;
}

Verdict determinism() {
  Verdict v;
  const ScenarioConfig c;  // full default suite on gaussian_line
  const auto a = report_json_string(run_suite(c));
  const auto b = report_json_string(run_suite(c));
  const auto report = report_from_json(nlohmann::ordered_json::parse(a));
  v.pass = a == b && report.checks.size() >= 25;
  v.detail << " bytes=" << a.size() << " identical=" << (a == b) << " checks=" << report.checks.size()
           << " failures=" << report.failures();
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"doubling constants on gaussian_line", doubling},
      {"comparability for polynomial potentials", polynomial_comparability},
      {"aperture identity", aperture_identity},
      {"tent cover certificate", [] { return atomic_checks({"atomic.cover_certificate"}, {"sets", "max_balls"}); }},
      {"pointwise level-set bound", [] { return atomic_checks({"atomic.pointwise2"}, {"thresholds", "worst_ratio"}); }},
      {"atomic decomposition",
       [] {
         return atomic_checks({"atomic.reconstruction", "atomic.atoms", "atomic.lambda_bound", "atomic.partition"},
                              {"decompositions", "worst_relative_error", "atoms"});
       }},
      {"norm equivalence",
       [] {
         return atomic_checks({"atomic.norm_equivalence"}, {"rho_min", "rho_max", "C_1_5", "K3_max", "corpus_bound"});
       }},
      {"atom duality", [] { return atomic_checks({"atomic.duality"}, {"pairings", "worst_ratio"}); }},
      {"dyadic systems and maximal functions", dyadic_systems},
      {"cone covering", cone_covering},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail << " exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += !v.pass;
    std::printf("criterion %2zu %s: %s (%.1f s)%s\n", i + 1, v.pass ? "PASS" : "FAIL", criteria[i].first, secs,
                v.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
