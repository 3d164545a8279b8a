#include <gtest/gtest.h>

#include "fixtures.hpp"

using namespace tentlab;

namespace {

ScenarioConfig small_config() {
  ScenarioConfig c;
  c.space_preset = "uniform_local";
  c.corpus_size = 4;
  c.trials = 4;
  c.test_functions = 2;
  c.seed = 5;
  return c;
}

}  // namespace

TEST(Suite, ByteIdenticalAcrossRuns) {
  const auto c = small_config();
  const auto a = report_json_string(run_suite(c));
  const auto b = report_json_string(run_suite(c));
  EXPECT_EQ(a, b);
}

TEST(Suite, ParallelMatchesSerial) {
  auto c = small_config();
  const auto serial = run_suite(c);
  c.parallel = true;
  const auto parallel = run_suite(c);
  EXPECT_EQ(report_json_string(serial), report_json_string(parallel));
}

TEST(Suite, SeedChangesRandomisedChecks) {
  auto c = small_config();
  c.suites = {false, false, true, false, false, false};
  const auto a = report_json_string(run_suite(c));
  c.seed = 6;
  EXPECT_NE(a, report_json_string(run_suite(c)));
}

TEST(Suite, EveryAssertedCheckPasses) {
  const auto r = run_suite(small_config());
  for (const auto& c : r.checks) EXPECT_NE(c.status, CheckStatus::fail) << c.name << ": " << c.witness;
  EXPECT_GE(r.checks.size(), 25u);
}

TEST(Suite, SelectionRestrictsChecks) {
  auto c = small_config();
  c.suites = {true, false, false, false, false, false};
  for (const auto& rec : run_suite(c).checks) EXPECT_EQ(rec.name.rfind("space.", 0), 0u) << rec.name;
}

TEST(Suite, ConeCoverNotApplicableInThreeDimensions) {
  const auto dir = std::filesystem::temp_directory_path() / "tentlab_test_suite";
  std::filesystem::create_directories(dir);
  const auto path = dir / "three.json";
  std::ofstream(path) << R"({"points": [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]], "mu": "uniform",
    "potential": {"type": "explicit", "values": [0, 0, 0, 0]}, "admissibility": {"type": "constant", "value": 1}})";
  ScenarioConfig c = small_config();
  c.space_file = path.string();
  c.suites = {false, false, false, false, false, true};
  const auto r = run_suite(c);
  ASSERT_FALSE(r.checks.empty());
  for (const auto& rec : r.checks) EXPECT_EQ(rec.status, CheckStatus::report_only) << rec.name;
  std::filesystem::remove_all(dir);
}
