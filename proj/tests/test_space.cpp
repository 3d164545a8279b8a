#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fixtures.hpp"

using namespace tentlab;
using fixtures::line;

namespace {

DiscreteSpace five_points() {
  return build_space({{-1.0}, {-0.5}, {0.0}, {0.5}, {1.0}}, std::vector<double>(5, 1.0),
                     ExplicitPotential{std::vector<double>(5, 0.0)}, ConstantAdmissibility{1.0});
}

}  // namespace

TEST(Space, GaussianLineAdmissibility) {
  const auto& s = *line().space;
  EXPECT_DOUBLE_EQ(s.m()[400], 1.0);                   // x = 0
  EXPECT_NEAR(s.m()[600], 0.5, 1e-12);                 // x = 2
  EXPECT_DOUBLE_EQ(s.m()[450], 1.0);                   // x = 0.5
  EXPECT_NEAR(s.phi()[400], 0.5 * std::log(2.0 * std::numbers::pi), 1e-15);
}

TEST(Space, QuarticGradientAdmissibility) {
  const auto q = quartic_line();
  EXPECT_NEAR(q.space->coords(300)[0], 1.0, 1e-12);
  EXPECT_NEAR(q.space->m()[300], 0.25, 1e-12);
  EXPECT_DOUBLE_EQ(q.space->m()[200], 1.0);  // x = 0, gradient vanishes
}

TEST(Space, ZeroPotentialGivesGammaEqualMu) {
  const auto s = five_points();
  for (PointIndex i = 0; i < s.size(); ++i) EXPECT_EQ(s.gamma()[i], s.mu()[i]);
}

TEST(Space, BallMembersStrictInequality) {
  const auto s = five_points();
  EXPECT_EQ(ball_members(s, {2, 1.0}), (std::vector<PointIndex>{1, 2, 3}));
  EXPECT_EQ(ball_members(s, {2, 10.0}), (std::vector<PointIndex>{0, 1, 2, 3, 4}));
  EXPECT_EQ(ball_members(s, {2, 0.25}), (std::vector<PointIndex>{2}));
  EXPECT_EQ(gamma_mass(s, std::vector<PointIndex>{}), 0.0);
}

TEST(Space, GaussianMassMatchesErrorFunction) {
  const auto& s = *line().space;
  // 99 grid points with |x| < 0.5, each carrying the cell [x - h/2, x + h/2).
  const double ball = s.ball_mass({400, 0.5});
  EXPECT_NEAR(ball, fixtures::normal_cdf(0.495) - fixtures::normal_cdf(-0.495), 2e-6);
  EXPECT_NEAR(ball, 0.3829, 5e-3);
  const auto all = from_mask(PointMask(s.size(), 1));
  EXPECT_NEAR(gamma_mass(s, all), 0.99994, 1e-5);
  EXPECT_NEAR(gamma_mass(s, all), fixtures::normal_cdf(4.005) - fixtures::normal_cdf(-4.005), 2e-6);
}

TEST(Space, BallMonotoneAndAdditive) {
  const auto& s = *line().space;
  Rng rng(11);
  for (int k = 0; k < 200; ++k) {
    const PointIndex c = rng.index(s.size());
    const double r1 = rng.uniform(0.0, 2.0);
    const double r2 = r1 + rng.uniform(0.0, 2.0);
    const auto a = ball_members(s, {c, r1});
    const auto b = ball_members(s, {c, r2});
    if (r1 > 0.0) {
      EXPECT_TRUE(std::binary_search(a.begin(), a.end(), c));
    }
    EXPECT_TRUE(std::includes(b.begin(), b.end(), a.begin(), a.end()));
    std::vector<PointIndex> lo, hi;
    for (PointIndex i = 0; i < s.size(); ++i) (rng.uniform() < 0.3 ? lo : hi).push_back(i);
    EXPECT_NEAR(gamma_mass(s, lo) + gamma_mass(s, hi), gamma_mass(s, from_mask(PointMask(s.size(), 1))), 1e-14);
    if (!lo.empty()) {
      EXPECT_GT(gamma_mass(s, lo), 0.0);
    }
  }
}

TEST(Space, CandidateRadiiEnumerateDistinctBalls) {
  const auto& s = *fixtures::small_line().space;
  for (PointIndex c = 0; c < s.size(); c += 7) {
    const auto radii = candidate_radii(s, c, 1.0);
    std::set<std::size_t> counts;
    for (double r : radii) counts.insert(s.count_open(c, r));
    // Every open ball of radius in (0, 1] equals one of the enumerated ones.
    for (double r = 1e-3; r <= 1.0; r += 1e-3) EXPECT_TRUE(counts.count(s.count_open(c, r))) << c << ' ' << r;
  }
}

TEST(Space, MetricAudit) {
  const auto a = audit_metric(*fixtures::small_line().space);
  EXPECT_TRUE(a.symmetric && a.zero_diagonal && a.triangle);
  std::vector<double> table = {0, 1, 5, 1, 0, 1, 5, 1, 0};
  const auto bad = build_space_from_distances(table, 3, {1, 1, 1}, ExplicitPotential{{0, 0, 0}}, ConstantAdmissibility{1});
  const auto b = audit_metric(bad);
  EXPECT_FALSE(b.triangle);
  EXPECT_NEAR(b.worst_triangle_excess, 3.0, 1e-12);
}

TEST(Space, RejectsBadInput) {
  EXPECT_THROW(build_space({{0.0}, {1.0}}, {1.0, -1.0}, ExplicitPotential{{0, 0}}, ConstantAdmissibility{1}), Error);
  EXPECT_THROW(build_space({{0.0}, {1.0}}, {1.0}, ExplicitPotential{{0, 0}}, ConstantAdmissibility{1}), Error);
  std::vector<double> asym = {0, 1, 2, 0};
  EXPECT_THROW(build_space_from_distances(asym, 2, {1, 1}, ExplicitPotential{{0, 0}}, ConstantAdmissibility{1}), Error);
}

TEST(ConditionA, GaussianLineAgainstExplicitBound) {
  const auto& s = *line().space;
  for (double alpha : {0.5, 1.0, 2.0, 5.0}) {
    const auto rep = verify_condition_A(s, alpha);
    ASSERT_TRUE(rep.nominal_bound.has_value());
    EXPECT_NEAR(*rep.nominal_bound, 2.0 * std::exp(alpha * (5.0 * alpha + 6.0) / 2.0), 1e-9 * *rep.nominal_bound);
    EXPECT_TRUE(rep.pass) << alpha;
    EXPECT_LE(rep.empirical_constant, *rep.nominal_bound);
  }
  EXPECT_NEAR(*verify_condition_A(s, 1.0).nominal_bound, 489.38, 0.01);
}

TEST(ConditionA, UnweightedDoublingEqualsMeasureDoubling) {
  auto pts = line_grid(0.0, 1.0, 41);
  const auto s = build_space(pts, std::vector<double>(41, 0.025), ExplicitPotential{std::vector<double>(41, 0.0)},
                             ConstantAdmissibility{1e6});
  EXPECT_DOUBLE_EQ(verify_condition_A(s, 1.0).empirical_constant, measure_mu_doubling(s));
  EXPECT_DOUBLE_EQ(measure_mu_doubling(s), 3.0);
}

TEST(ConditionB, MinimalM) {
  const double half_log = 0.5 * std::log(2.0 * std::numbers::pi);
  EXPECT_NEAR(verify_condition_B(Polynomial({half_log, 0.0, 0.5}), -10.0, 10.0).minimal_M, 1.0, 1e-3);
  EXPECT_EQ(verify_condition_B(Polynomial({0.0, 3.0}), -10.0, 10.0).minimal_M, 0.0);
  EXPECT_NEAR(verify_condition_B(Polynomial({0, 0, 0, 0, 1.0}), -2.0, 2.0).minimal_M, 3.0 * std::cbrt(4.0), 1e-3);
}

TEST(ConditionC, ConstantAdmissibility) {
  EXPECT_DOUBLE_EQ(verify_condition_C(*fixtures::uniform().space, 1.0).c_alpha, 1.0);
}

TEST(ConditionC, ExponentialBoundForPolynomialPotentials) {
  for (const auto& ns : {gaussian_polynomial_line(), quartic_line()}) {
    const auto& pp = std::get<PolynomialPotential>(ns.space->potential());
    const double M = verify_condition_B(pp.poly, -4.0, 4.0).minimal_M;
    for (double alpha : {1.0, 2.0}) EXPECT_LE(verify_condition_C(*ns.space, alpha).c_alpha, std::exp(M * alpha)) << ns.name;
  }
}
