#include <gtest/gtest.h>

#include "fixtures.hpp"

using namespace tentlab;

TEST(Sector, ApexExcludedAxisIncluded) {
  const std::vector<double> v = {0.6, 0.8};
  const std::vector<double> zero = {0.0, 0.0};
  EXPECT_FALSE(in_sector(zero, v, 1.0));
  for (double t : {0.01, 0.5, 1.0}) {
    const std::vector<double> u = {t * v[0], t * v[1]};
    EXPECT_TRUE(in_sector(u, v, 1.0)) << t;
  }
  const std::vector<double> far = {1.2 * v[0], 1.2 * v[1]};
  EXPECT_TRUE(in_sector(far, v, 1.0));      // within t/4 of the segment end
  const std::vector<double> beyond = {1.3 * v[0], 1.3 * v[1]};
  EXPECT_FALSE(in_sector(beyond, v, 1.0));  // |u - v| = 0.3 > 1/4
  const std::vector<double> back = {-0.1 * v[0], -0.1 * v[1]};
  EXPECT_FALSE(in_sector(back, v, 1.0));
}

TEST(Sector, MatchesBruteForceDistanceToSegment) {
  Rng rng(211);
  for (int k = 0; k < 20000; ++k) {
    const double a = 2.0 * std::numbers::pi * rng.uniform();
    const std::vector<double> v = {std::cos(a), std::sin(a)};
    const std::vector<double> u = {rng.uniform(-2, 2), rng.uniform(-2, 2)};
    const double t = rng.uniform(0.1, 2.0);
    bool brute = false;
    for (int i = 1; i <= 4000 && !brute; ++i) {
      const double s = t * i / 4000.0;
      brute = std::hypot(u[0] - s * v[0], u[1] - s * v[1]) < s / 4.0 - 1e-9;
    }
    if (brute) {
      EXPECT_TRUE(in_sector(u, v, t));
    }
  }
}

TEST(Sector, MembersRequireUnitDirection) {
  const auto& s = *fixtures::plane().space;
  EXPECT_THROW(sector_members(s, {0, {2.0, 0.0}, 1.0}), Error);
  EXPECT_THROW(sector_members(s, {0, {1.0}, 1.0}), Error);
  EXPECT_THROW(sector_members(s, {0, {1.0, 0.0}, 0.0}), Error);
}

TEST(DirectionNet, SizesAndCoverage) {
  EXPECT_EQ(direction_net(1).size(), 2u);
  const auto net = direction_net(2);
  EXPECT_EQ(net.size(), 13u);
  const double limit = std::atan(0.25);
  double worst = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const double a = 2.0 * std::numbers::pi * k / 10000.0;
    double best = 4.0;
    for (const auto& v : net) best = std::min(best, std::acos(std::clamp(std::cos(a) * v[0] + std::sin(a) * v[1], -1.0, 1.0)));
    worst = std::max(worst, best);
  }
  EXPECT_LE(worst, limit);
  EXPECT_THROW(direction_net(3), Error);
}

TEST(Extension, EmptyAndFull) {
  for (const auto* ns : {&fixtures::line(), &fixtures::plane()}) {
    const auto& s = *ns->space;
    const auto p = lda_params(s);
    const auto none = extension(s, PointMask(s.size(), 0), p);
    EXPECT_TRUE(none.routes_agree);
    EXPECT_EQ(none.mass, 0.0);
    const auto all = extension(s, PointMask(s.size(), 1), p);
    EXPECT_TRUE(all.routes_agree);
    for (char b : all.set) EXPECT_TRUE(b);
  }
}

TEST(Extension, RoutesAgreeAndContainE) {
  const auto& s = *fixtures::plane().space;
  Rng rng(223);
  for (int k = 0; k < 30; ++k) {
    const auto E = random_open_set(s, rng);
    for (double lambda : {0.05, 0.3, 0.7}) {
      const auto ext = extension(s, E, 2.0, lambda);
      EXPECT_TRUE(ext.routes_agree);
      for (PointIndex x = 0; x < s.size(); ++x)
        if (E[x]) {
          EXPECT_TRUE(ext.set[x]);
        }
    }
  }
}

TEST(Parameters, Invariants) {
  for (const auto* ns : {&fixtures::line(), &fixtures::plane(), &fixtures::uniform()}) {
    const auto p = lda_params(*ns->space);
    EXPECT_GE(p.beta, 1.0) << ns->name;
    EXPECT_NEAR(p.alpha, 2.0 * p.beta * p.c_2beta, 1e-12 * p.alpha);
    EXPECT_GE(p.A_beta, 1.0);
    EXPECT_LT(p.lambda * p.A_beta, 1.0);
    EXPECT_GT(p.lambda, 0.0);
  }
}

TEST(FirstContact, RootOfSectorBoundary) {
  const std::vector<double> v = {1.0, 0.0};
  EXPECT_FALSE(first_contact(std::vector<double>{-1.0, 0.0}, v));
  EXPECT_FALSE(first_contact(std::vector<double>{0.1, 1.0}, v));  // off the 1/4 cone
  const auto t = first_contact(std::vector<double>{1.0, 0.0}, v);
  ASSERT_TRUE(t);
  EXPECT_NEAR(*t, 0.8, 1e-15);  // |1 - t| = t / 4
  Rng rng(227);
  for (int k = 0; k < 1000; ++k) {
    const std::vector<double> u = {rng.uniform(0.5, 2.0), rng.uniform(-0.2, 0.2)};
    const auto r = first_contact(u, v);
    if (!r) continue;
    EXPECT_NEAR(std::hypot(u[0] - *r, u[1]), *r / 4.0, 1e-12);
  }
}

TEST(ConeCover, PunctureInPlane) {
  const auto& region = fixtures::plane_region();
  const auto& s = region.space();
  const PointIndex hole = 0;
  PointMask E(s.size(), 1);
  E[hole] = 0;
  const PointIndex x = s.neighbors(hole)[1];
  const auto cert = cone_cover(region, E, E, x);
  EXPECT_EQ(cert.x_m.size(), 13u);
  std::size_t hits = 0;
  for (const auto& xm : cert.x_m)
    if (xm) {
      EXPECT_EQ(*xm, hole);
      ++hits;
    }
  EXPECT_GE(hits, 1u);
  EXPECT_TRUE(cert.pass());
}

TEST(ConeCover, LineNearestComplement) {
  const auto& region = fixtures::line_region();
  const auto& s = region.space();
  PointMask E(s.size(), 0);
  for (PointIndex i = 300; i < 500; ++i) E[i] = 1;
  const auto cert = cone_cover(region, E, E, 400);
  ASSERT_EQ(cert.x_m.size(), 2u);
  ASSERT_TRUE(cert.x_m[0] && cert.x_m[1]);
  EXPECT_EQ(*cert.x_m[0], 500u);
  EXPECT_EQ(*cert.x_m[1], 299u);
  EXPECT_TRUE(cert.pass());
  EXPECT_THROW(cone_cover(region, E, E, 10), Error);
}

TEST(ConeCover, RandomSetsNoFailures) {
  const auto& region = fixtures::plane_region();
  const auto& s = region.space();
  const auto p = lda_params(s);
  Rng rng(229);
  std::size_t pairs = 0;
  while (pairs < 20) {
    const auto E = random_open_set(s, rng);
    std::vector<PointIndex> in;
    for (PointIndex x = 0; x < s.size(); ++x)
      if (E[x]) in.push_back(x);
    if (in.empty() || in.size() == s.size()) continue;
    const PointIndex x = in[rng.index(in.size())];
    for (double lambda : {p.lambda, 0.5}) {
      const auto ext = extension(s, E, p.alpha, lambda);
      EXPECT_TRUE(cone_cover(region, E, ext.set, x).pass()) << "lambda=" << lambda;
    }
    ++pairs;
  }
}

TEST(Corollary, LevelAboveMaximumIsTrivial) {
  const auto& region = fixtures::line_region();
  const auto p = lda_params(region.space());
  Rng rng(233);
  const auto f = random_tent_function(region, rng);
  const auto a1 = a_q_alpha(region, f, 2.0, 1.0);
  const double top = *std::max_element(a1.begin(), a1.end());
  const auto rep = corollary_pointwise_check(region, f, 2.0, top, p);
  EXPECT_EQ(rep.level_set_size, 0u);
  EXPECT_TRUE(rep.pass);
  EXPECT_NEAR(rep.worst_value, top, 1e-12 * top);
}

TEST(Corollary, RandomLevels) {
  const auto& region = fixtures::plane_region();
  const auto p = lda_params(region.space());
  Rng rng(239);
  for (int k = 0; k < 5; ++k) {
    const auto f = random_tent_function(region, rng);
    const auto a1 = a_q_alpha(region, f, 1.0, 1.0);
    const double top = *std::max_element(a1.begin(), a1.end());
    for (double frac : {0.1, 0.5, 0.9}) EXPECT_TRUE(corollary_pointwise_check(region, f, 1.0, frac * top, p, a1).pass);
  }
}

TEST(Geometry, SelfTests) {
  Rng rng(241);
  const auto top = topcor_selftest(20000, rng);
  EXPECT_TRUE(top.pass) << top.worst_excess;
  const auto div = divergence_selftest(20000, rng);
  EXPECT_TRUE(div.pass) << div.worst_excess;
  EXPECT_LE(div.worst_excess, 0.0);
}

TEST(LdaStandalone, NoViolations) {
  const auto& s = *fixtures::plane().space;
  Rng rng(251);
  const auto rep = lda_check(s, lda_params(s), 200, rng);
  EXPECT_TRUE(rep.pass());
  EXPECT_GT(rep.nonempty, 0u);
}
