#ifndef TENTLAB_REPORT_HPP
#define TENTLAB_REPORT_HPP

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "tentlab/space.hpp"

namespace tentlab {

inline constexpr const char* kReportSchema = "tentlab.report/1";

enum class CheckStatus { pass, fail, report_only };

inline const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::report_only: return "report-only";
  }
  return "?";
}

inline CheckStatus status_from_string(const std::string& s) {
  if (s == "pass") return CheckStatus::pass;
  if (s == "fail") return CheckStatus::fail;
  if (s == "report-only") return CheckStatus::report_only;
  throw Error("unknown check status '" + s + "'");
}

/// One certification check.  Measured values keep insertion order.
struct CheckRecord {
  std::string name;
  std::string property;
  CheckStatus status = CheckStatus::report_only;
  std::vector<std::pair<std::string, double>> measured;
  double tolerance = 0.0;
  std::string witness;

  CheckRecord& measure(std::string key, double value) {
    measured.emplace_back(std::move(key), value);
    return *this;
  }
  /// Sets pass/fail; a failure without a witness gets a placeholder.
  CheckRecord& assert_that(bool ok, std::string failure_witness = {}) {
    status = ok ? CheckStatus::pass : CheckStatus::fail;
    if (!ok) witness = failure_witness.empty() ? "unspecified" : std::move(failure_witness);
    return *this;
  }
  friend bool operator==(const CheckRecord& a, const CheckRecord& b) {
    if (a.name != b.name || a.property != b.property || a.status != b.status || a.witness != b.witness ||
        a.measured.size() != b.measured.size())
      return false;
    auto same = [](double x, double y) { return x == y || (std::isnan(x) && std::isnan(y)); };
    if (!same(a.tolerance, b.tolerance)) return false;
    for (std::size_t i = 0; i < a.measured.size(); ++i)
      if (a.measured[i].first != b.measured[i].first || !same(a.measured[i].second, b.measured[i].second)) return false;
    return true;
  }
};

/// Table of plot data, written as its own CSV.
struct PlotSeries {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  friend bool operator==(const PlotSeries&, const PlotSeries&) = default;
};

struct CertificationReport {
  std::string schema = kReportSchema;
  nlohmann::ordered_json scenario = nlohmann::ordered_json::object();
  std::vector<CheckRecord> checks;
  std::vector<PlotSeries> plots;

  CheckRecord& add(std::string name, std::string property) {
    CheckRecord rec;
    rec.name = std::move(name);
    rec.property = std::move(property);
    checks.push_back(std::move(rec));
    return checks.back();
  }
  bool all_pass() const {
    for (const auto& c : checks)
      if (c.status == CheckStatus::fail) return false;
    return true;
  }
  std::size_t failures() const {
    std::size_t n = 0;
    for (const auto& c : checks) n += c.status == CheckStatus::fail;
    return n;
  }
  const CheckRecord* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
  friend bool operator==(const CertificationReport& a, const CertificationReport& b) {
    return a.schema == b.schema && a.scenario == b.scenario && a.checks == b.checks && a.plots == b.plots;
  }
};

namespace detail {

// JSON has no infinities; non-finite numbers travel as strings.
inline nlohmann::ordered_json encode_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

inline double decode_number(const nlohmann::ordered_json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw Error("report: bad number '" + s + "'");
  }
  return j.get<double>();
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string format_double(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace detail

inline nlohmann::ordered_json to_json(const CertificationReport& r) {
  nlohmann::ordered_json j;
  j["schema"] = r.schema;
  j["scenario"] = r.scenario;
  j["summary"] = {{"checks", r.checks.size()}, {"failures", r.failures()}, {"status", r.all_pass() ? "pass" : "fail"}};
  auto& checks = j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : r.checks) {
    nlohmann::ordered_json rec;
    rec["name"] = c.name;
    rec["property"] = c.property;
    rec["status"] = to_string(c.status);
    nlohmann::ordered_json measured = nlohmann::ordered_json::object();
    for (const auto& [k, v] : c.measured) measured[k] = detail::encode_number(v);
    rec["measured"] = std::move(measured);
    rec["tolerance"] = detail::encode_number(c.tolerance);
    rec["witness"] = c.witness;
    checks.push_back(std::move(rec));
  }
  auto& plots = j["plots"] = nlohmann::ordered_json::array();
  for (const auto& p : r.plots) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : p.rows) {
      nlohmann::ordered_json jr = nlohmann::ordered_json::array();
      for (double x : row) jr.push_back(detail::encode_number(x));
      rows.push_back(std::move(jr));
    }
    plots.push_back({{"name", p.name}, {"columns", p.columns}, {"rows", std::move(rows)}});
  }
  return j;
}

inline CertificationReport report_from_json(const nlohmann::ordered_json& j) {
  CertificationReport r;
  r.schema = j.at("schema").get<std::string>();
  if (r.schema != kReportSchema) throw Error("report: unsupported schema '" + r.schema + "'");
  r.scenario = j.at("scenario");
  for (const auto& jc : j.at("checks")) {
    CheckRecord c;
    c.name = jc.at("name").get<std::string>();
    c.property = jc.at("property").get<std::string>();
    c.status = status_from_string(jc.at("status").get<std::string>());
    for (const auto& [k, v] : jc.at("measured").items()) c.measured.emplace_back(k, detail::decode_number(v));
    c.tolerance = detail::decode_number(jc.at("tolerance"));
    c.witness = jc.at("witness").get<std::string>();
    r.checks.push_back(std::move(c));
  }
  for (const auto& jp : j.at("plots")) {
    PlotSeries p;
    p.name = jp.at("name").get<std::string>();
    p.columns = jp.at("columns").get<std::vector<std::string>>();
    for (const auto& jr : jp.at("rows")) {
      std::vector<double> row;
      for (const auto& x : jr) row.push_back(detail::decode_number(x));
      p.rows.push_back(std::move(row));
    }
    r.plots.push_back(std::move(p));
  }
  return r;
}

inline std::string report_json_string(const CertificationReport& r) { return to_json(r).dump(2) + "\n"; }

/// One row per check; measured values are flattened as key=value pairs.
inline void write_checks_csv(std::ostream& out, const CertificationReport& r) {
  out << "name,property,status,measured,tolerance,witness\n";
  for (const auto& c : r.checks) {
    std::string measured;
    for (const auto& [k, v] : c.measured) {
      if (!measured.empty()) measured += ';';
      measured += k + "=" + detail::format_double(v);
    }
    out << detail::csv_escape(c.name) << ',' << detail::csv_escape(c.property) << ',' << to_string(c.status) << ','
        << detail::csv_escape(measured) << ',' << detail::format_double(c.tolerance) << ','
        << detail::csv_escape(c.witness) << '\n';
  }
}

inline void write_plot_csv(std::ostream& out, const PlotSeries& p) {
  for (std::size_t i = 0; i < p.columns.size(); ++i) out << (i ? "," : "") << detail::csv_escape(p.columns[i]);
  out << '\n';
  for (const auto& row : p.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << detail::format_double(row[i]);
    out << '\n';
  }
}

enum class ReportFormat { json, csv };

/// Writes report.json or report.csv into dir, plus plot_<name>.csv per plot series.
/// Returns the paths written.
inline std::vector<std::filesystem::path> emit_report(const CertificationReport& r, const std::filesystem::path& dir,
                                                      ReportFormat format) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  std::vector<std::filesystem::path> written;
  auto open = [&](const std::filesystem::path& p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error("cannot write '" + p.string() + "'");
    written.push_back(p);
    return out;
  };
  if (format == ReportFormat::json) {
    auto out = open(dir / "report.json");
    out << report_json_string(r);
  } else {
    auto out = open(dir / "report.csv");
    write_checks_csv(out, r);
  }
  for (const auto& p : r.plots) {
    auto out = open(dir / ("plot_" + p.name + ".csv"));
    write_plot_csv(out, p);
  }
  return written;
}

}  // namespace tentlab

#endif  // TENTLAB_REPORT_HPP
