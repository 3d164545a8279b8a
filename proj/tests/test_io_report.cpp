#include <gtest/gtest.h>

#include <filesystem>
#include <limits>
#include <sstream>

#include "fixtures.hpp"

using namespace tentlab;
namespace fs = std::filesystem;

namespace {

CertificationReport sample_report() {
  CertificationReport r;
  r.scenario = {{"space", "unit"}, {"seed", 7}};
  r.add("a.first", "x <= y").measure("x", 1.5).measure("y", 2.0).assert_that(true);
  auto& b = r.add("b.second", "finite, \"quoted\"");
  b.measure("inf", std::numeric_limits<double>::infinity())
      .measure("neg", -std::numeric_limits<double>::infinity())
      .measure("nan", std::numeric_limits<double>::quiet_NaN());
  b.tolerance = 1e-9;
  b.assert_that(false, "node 3, t=0.5");
  r.plots.push_back({"curve", {"a", "b"}, {{1.0, 0.1}, {2.0, std::numeric_limits<double>::infinity()}}});
  return r;
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("tentlab_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST(Report, JsonRoundTrip) {
  const auto r = sample_report();
  const auto j = to_json(r);
  EXPECT_EQ(j["summary"]["failures"], 1);
  EXPECT_EQ(j["summary"]["status"], "fail");
  EXPECT_EQ(j["checks"][1]["measured"]["inf"], "inf");
  EXPECT_EQ(j["checks"][1]["measured"]["nan"], "nan");
  const auto back = report_from_json(nlohmann::ordered_json::parse(report_json_string(r)));
  EXPECT_EQ(back, r);
  EXPECT_EQ(report_json_string(back), report_json_string(r));
}

TEST(Report, MeasuredKeysKeepOrder) {
  CertificationReport r;
  r.add("c", "p").measure("zeta", 1).measure("alpha", 2);
  const auto s = report_json_string(r);
  EXPECT_LT(s.find("zeta"), s.find("alpha"));
}

TEST(Report, RejectsUnknownSchemaAndStatus) {
  auto j = to_json(sample_report());
  j["schema"] = "other/9";
  EXPECT_THROW(report_from_json(j), Error);
  j = to_json(sample_report());
  j["checks"][0]["status"] = "maybe";
  EXPECT_THROW(report_from_json(j), Error);
}

TEST(Report, EmptyReportCsvIsHeaderOnly) {
  std::ostringstream os;
  write_checks_csv(os, CertificationReport{});
  EXPECT_EQ(os.str(), "name,property,status,measured,tolerance,witness\n");
}

TEST(Report, CsvEscapesAndFlattens) {
  std::ostringstream os;
  write_checks_csv(os, sample_report());
  const auto s = os.str();
  EXPECT_NE(s.find("a.first,x <= y,pass,x=1.5;y=2,0,\n"), std::string::npos);
  EXPECT_NE(s.find("\"finite, \"\"quoted\"\"\""), std::string::npos);
  EXPECT_NE(s.find("\"node 3, t=0.5\""), std::string::npos);
}

TEST(Report, EmitWritesReportAndPlots) {
  const auto dir = scratch("emit");
  const auto json = emit_report(sample_report(), dir, ReportFormat::json);
  ASSERT_EQ(json.size(), 2u);
  EXPECT_TRUE(fs::exists(dir / "report.json"));
  EXPECT_TRUE(fs::exists(dir / "plot_curve.csv"));
  const auto csv = emit_report(sample_report(), dir, ReportFormat::csv);
  EXPECT_TRUE(fs::exists(dir / "report.csv"));
  EXPECT_EQ(csv.size(), 2u);
  std::ostringstream plot;
  write_plot_csv(plot, sample_report().plots[0]);
  EXPECT_EQ(plot.str(), "a,b\n1,0.10000000000000001\n2,inf\n");
  fs::remove_all(dir);
}

TEST(SpaceIo, UniformWeightsAndVariants) {
  const auto j = nlohmann::json::parse(R"({
    "points": [[0.0], [0.5], [1.5]],
    "mu": "uniform",
    "potential": {"type": "polynomial_1d", "coefficients": [0, 0, 0.5]},
    "admissibility": {"type": "constant", "value": 2.0}
  })");
  const auto s = space_from_json(j);
  ASSERT_EQ(s.size(), 3u);
  for (double m : s.mu()) EXPECT_EQ(m, 1.0);
  EXPECT_NEAR(s.phi()[2], 0.5 * 1.5 * 1.5, 1e-15);
  for (double m : s.m()) EXPECT_EQ(m, 2.0);
}

TEST(SpaceIo, MalformedInputs) {
  auto bad = [](const char* text) { return nlohmann::json::parse(text); };
  EXPECT_THROW(space_from_json(bad("[]")), ParseError);
  EXPECT_THROW(space_from_json(bad(R"({"mu": "uniform"})")), ParseError);
  EXPECT_THROW(space_from_json(bad(R"({"points": [[0]], "mu": "flat", "potential": {"type": "explicit", "values": [0]},
                                       "admissibility": {"type": "distance_based"}})")),
               ParseError);
  EXPECT_THROW(space_from_json(bad(R"({"points": [[0]], "mu": [1], "potential": {"type": "cubic"},
                                       "admissibility": {"type": "distance_based"}})")),
               ParseError);
  EXPECT_THROW(space_from_json(bad(R"({"points": [[0]], "mu": [1], "potential": {"type": "explicit", "values": [0]},
                                       "admissibility": {"type": "wide"}})")),
               ParseError);
  EXPECT_THROW(space_from_json(bad(R"({"points": [[0]], "mu": "uniform", "potential": {"type": "explicit", "values": [0]}})")),
               ParseError);
}

TEST(SpaceIo, CorruptedFileThrowsParseError) {
  const auto dir = scratch("corrupt");
  {
    std::ofstream(dir / "broken.json") << "{\"points\": [[0.0], [1.0]], \"mu\": [1, ";
    std::ofstream(dir / "negative.json")
        << R"({"points": [[0.0], [1.0]], "mu": [1, -1], "potential": {"type": "explicit", "values": [0, 0]},
               "admissibility": {"type": "distance_based"}})";
  }
  EXPECT_THROW(load_space((dir / "broken.json").string()), ParseError);
  EXPECT_THROW(load_space((dir / "negative.json").string()), ParseError);
  EXPECT_THROW(load_space((dir / "missing.json").string()), ParseError);
  fs::remove_all(dir);
}

TEST(FunctionIo, CsvRoundTrip) {
  const auto& region = fixtures::small_line_region();
  Rng rng(307);
  const auto f = random_tent_function(region, rng);
  std::stringstream ss;
  write_function_csv(ss, f);
  const auto g = load_function_csv(ss, region.size());
  for (NodeIndex v = 0; v < region.size(); ++v) EXPECT_EQ(f[v], g[v]);
}

TEST(FunctionIo, BadRows) {
  std::istringstream range("node,value\n99999999,1\n");
  EXPECT_THROW(load_function_csv(range, 10), ParseError);
  std::istringstream junk("node,value\n1,2\nthree,4\n");
  EXPECT_THROW(load_function_csv(junk, 10), ParseError);
  std::istringstream comments("# c\n3,2.5\n");
  EXPECT_EQ(load_function_csv(comments, 10)[3], 2.5);
}

TEST(Config, DefaultsAndOverrides) {
  const auto c = config_from_json(nlohmann::json::parse(R"({
    "space": "uniform_local", "q": 2, "seed": 9, "time_grid": {"levels": 8},
    "suites": {"cone_cover": false}, "format": "csv"
  })"));
  EXPECT_EQ(c.space_preset, "uniform_local");
  EXPECT_EQ(c.q, std::vector<double>{2.0});
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.time_levels, 8u);
  EXPECT_FALSE(c.suites.cone_cover);
  EXPECT_TRUE(c.suites.atomic);
  EXPECT_EQ(c.format, ReportFormat::csv);
  const auto j = scenario_json(c);
  EXPECT_EQ(config_from_json(nlohmann::json::parse(j.dump())).seed, 9u);
}

TEST(Config, Rejections) {
  auto parse = [](const char* text) { return config_from_json(nlohmann::json::parse(text)); };
  EXPECT_THROW(parse(R"({"q": 0.5})"), ParseError);
  EXPECT_THROW(parse(R"({"p": -1})"), ParseError);
  EXPECT_THROW(parse(R"({"aperture_pairs": [[3, 1]]})"), ParseError);
  EXPECT_THROW(parse(R"({"schema": "tentlab.config/0"})"), ParseError);
  EXPECT_THROW(parse(R"({"format": "xml"})"), ParseError);
  EXPECT_THROW(parse(R"({"space": {"file": "/nonexistent/space.json"}})"), ParseError);
  EXPECT_THROW(parse(R"({"corpus_size": 0})"), ParseError);
  EXPECT_THROW(parse(R"({"seed": "one"})"), ParseError);
  EXPECT_THROW(parse(R"({"space": 3})"), ParseError);
}
