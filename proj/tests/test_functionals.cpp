#include <gtest/gtest.h>

#include <complex>

#include "fixtures.hpp"

using namespace tentlab;

namespace {

double rel(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

}  // namespace

TEST(Functionals, ZeroFunction) {
  const auto& r = fixtures::small_line_region();
  const TentFunction<double> f(r.size());
  for (double a : a_q_alpha(r, f, 2.0, 1.0)) EXPECT_EQ(a, 0.0);
  EXPECT_EQ(tpq_norm(r, f, 1.0, 2.0, 1.0), 0.0);
  EXPECT_EQ(tinf_norm(r, f, 2.0).value, 0.0);
}

TEST(Functionals, SingleNodeArea) {
  const auto& r = fixtures::small_line_region();
  const auto& s = r.space();
  const NodeIndex v = r.node(40, 5);
  const auto f = point_mass(r, v);
  for (double alpha : {1.0, 2.0}) {
    const auto a = a_q_alpha(r, f, 2.0, alpha);
    const double expect = std::sqrt(r.weight(v) / r.ball_mass(v));
    for (PointIndex x = 0; x < s.size(); ++x) {
      if (s.distance(x, 40) < alpha * r.time(v)) EXPECT_NEAR(a[x], expect, 1e-15);
      else EXPECT_EQ(a[x], 0.0);
    }
  }
}

TEST(Functionals, ApertureMonotoneAndHomogeneous) {
  const auto& r = fixtures::line_region();
  const auto corpus = random_corpus(r, 10, 3);
  for (const auto& f : corpus) {
    const auto a1 = a_q_alpha(r, f, 2.0, 1.0);
    const auto a3 = a_q_alpha(r, f, 2.0, 3.0);
    for (std::size_t x = 0; x < a1.size(); ++x) EXPECT_LE(a1[x], a3[x] * (1.0 + 1e-14));
    for (double q : {1.0, 2.0}) {
      EXPECT_LE(tpq_norm(r, f, 1.0, q, 1.0), tpq_norm(r, f, 1.0, q, 2.0) * (1.0 + 1e-14));
      auto g = f;
      for (auto& x : g.values) x *= -2.5;
      EXPECT_NEAR(tpq_norm(r, g, 1.0, q, 1.0), 2.5 * tpq_norm(r, f, 1.0, q, 1.0), 1e-12 * tpq_norm(r, g, 1.0, q, 1.0));
    }
  }
}

TEST(Functionals, FubiniNodewise) {
  const auto& r = fixtures::plane_region();
  for (const auto& f : random_corpus(r, 10, 5))
    for (double q : {1.0, 2.0, 3.0})
      for (double alpha : {1.0, 2.0, 5.0})
        EXPECT_LT(rel(std::pow(tpq_norm(r, f, q, q, alpha), q), tqq_norm_power_nodewise(r, f, q, alpha)), 1e-12);
}

TEST(Functionals, ApertureChangeConstant) {
  const auto& r = fixtures::line_region();
  const auto& s = r.space();
  for (double alpha : {2.0, 3.0}) {
    const double C = verify_condition_A(s, 1.0, alpha).empirical_constant;
    for (const auto& f : random_corpus(r, 5, 7))
      for (double q : {1.0, 2.0})
        EXPECT_LE(tqq_norm_power_nodewise(r, f, q, alpha), C * tqq_norm_power_nodewise(r, f, q, 1.0) * (1.0 + 1e-12));
  }
}

TEST(Functionals, TinfSingleBallLowerBound) {
  const auto& r = fixtures::small_line_region();
  const Ball B0{40, 2.5};
  const auto g = tent_indicator(r, B0);
  double mass = 0.0;
  for (NodeIndex v = 0; v < r.size(); ++v) mass += g[v] * r.weight(v);
  for (double qp : {1.0, 2.0}) {
    const double lower = std::pow(mass / r.space().ball_mass(B0), 1.0 / qp);
    EXPECT_GE(tinf_norm(r, g, qp).value, lower * (1.0 - 1e-14));
  }
}

TEST(Functionals, TinfMatchesExhaustiveBruteForce) {
  const auto& r = fixtures::small_line_region();
  const auto& s = r.space();
  Rng rng(41);
  std::vector<TentFunction<double>> gs;
  for (int k = 0; k < 3; ++k) gs.push_back(random_dense_function(r, rng));
  for (double qp : {1.0, 2.0, std::numeric_limits<double>::infinity()}) {
    const auto fast = tinf_norms<double>(r, gs, qp);
    for (std::size_t k = 0; k < gs.size(); ++k) {
      double best = 0.0;
      for (PointIndex c = 0; c < s.size(); ++c)
        for (double rad : candidate_radii(s, c, 5.0 * s.m()[c])) best = std::max(best, tinf_ball_value(r, gs[k], qp, {c, rad}));
      EXPECT_LT(rel(best, fast[k].value), 1e-13) << qp;
    }
  }
}

TEST(Functionals, Pairing) {
  const auto& r = fixtures::small_line_region();
  const auto corpus = random_corpus(r, 3, 9);
  for (const auto& f : corpus) EXPECT_GE(pairing(r, f, f), 0.0);
  TentFunction<double> a(r.size()), b(r.size());
  for (NodeIndex v = 0; v < r.size(); ++v) (v % 2 ? a : b)[v] = 1.0 + static_cast<double>(v);
  EXPECT_EQ(pairing(r, a, b), 0.0);
  TentFunction<std::complex<double>> z(r.size());
  z[3] = {0.0, 2.0};
  EXPECT_NEAR(pairing(r, z, z).real(), 4.0 * r.weight(3), 1e-15);
  EXPECT_EQ(pairing(r, z, z).imag(), 0.0);
}

TEST(Cylindrical, IsometryIdempotenceApertureIdentity) {
  const auto& r = fixtures::line_region();
  for (const auto& f : random_corpus(r, 20, 13)) {
    for (double q : {1.0, 2.0})
      EXPECT_LT(rel(mixed_norm(j_alpha(r, f, 2.0), 1.0, q), tpq_norm(r, f, 1.0, q, 2.0)), 1e-12);
    const auto U = n_alpha(j_alpha(r, f, 1.0), 3.0);
    const auto UU = n_alpha(U, 3.0);
    for (NodeIndex v = 0; v < r.size(); ++v)
      for (std::size_t k = 0; k < U.entries(v); ++k) EXPECT_LT(rel(U.row(v)[k], UU.row(v)[k]), 1e-13);
    for (auto [beta, alpha] : {std::pair{1.0, 2.0}, std::pair{1.0, 3.0}, std::pair{2.0, 5.0}}) {
      const auto lhs = n_alpha(j_alpha(r, f, beta), alpha);
      const auto ja = j_alpha(r, f, alpha);
      for (NodeIndex v = 0; v < r.size(); ++v) {
        const double ratio = r.ball_mass(v, beta) / r.ball_mass(v, alpha);
        for (std::size_t k = 0; k < lhs.entries(v); ++k) ASSERT_LT(rel(lhs.row(v)[k], ratio * ja.row(v)[k]), 1e-12);
      }
    }
  }
}

TEST(Cylindrical, AveragingDominatedByLatticeMaximal) {
  // |N_alpha U(x; y, t)| <= M_alpha of U(., y, t) at x for alpha-admissible averaging balls.
  const auto& r = fixtures::small_line_region();
  const auto& s = r.space();
  Rng rng(43);
  const auto f = random_dense_function(r, rng);
  const double alpha = 1.0;
  auto U = j_alpha(r, f, 1.0);
  for (NodeIndex v = 0; v < r.size(); ++v)
    for (auto& x : U.row(v)) x = std::abs(x) * rng.uniform();
  const auto N = n_alpha(U, alpha);
  for (NodeIndex v = 0; v < r.size(); v += 3) {
    std::vector<double> u(s.size(), 0.0);
    for (std::size_t k = 0; k < U.entries(v); ++k) u[U.entry_point(v, k)] = U.row(v)[k];
    const auto M = local_maximal(s, u, alpha);
    for (std::size_t k = 0; k < N.entries(v); ++k) EXPECT_LE(N.row(v)[k], M[N.entry_point(v, k)] * (1.0 + 1e-13));
  }
}
