#ifndef TENTLAB_IO_HPP
#define TENTLAB_IO_HPP

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tentlab/functionals.hpp"
#include "tentlab/presets.hpp"
#include "tentlab/space.hpp"

namespace tentlab {

/// Malformed input file; the message names the offending field or line.
class ParseError : public Error {
 public:
  using Error::Error;
};

namespace detail {

template <class T>
T json_field(const nlohmann::json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ParseError(where + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(where + "." + key + ": " + e.what());
  }
}

inline PotentialSpec parse_potential(const nlohmann::json& j) {
  const auto type = json_field<std::string>(j, "type", "potential");
  if (type == "distance_function")
    return DistanceFunctionPotential{json_field<std::vector<PointIndex>>(j, "origins", "potential"),
                                     j.value("a", 0.0), j.value("a_prime", 0.5)};
  if (type == "explicit") return ExplicitPotential{json_field<std::vector<double>>(j, "values", "potential")};
  if (type == "polynomial_1d")
    return PolynomialPotential{Polynomial(json_field<std::vector<double>>(j, "coefficients", "potential"))};
  throw ParseError("potential.type: unknown variant '" + type + "'");
}

inline AdmissibilitySpec parse_admissibility(const nlohmann::json& j) {
  const auto type = json_field<std::string>(j, "type", "admissibility");
  if (type == "distance_based") return DistanceBasedAdmissibility{};
  if (type == "gradient_based") return GradientBasedAdmissibility{};
  if (type == "constant") return ConstantAdmissibility{j.value("value", 1.0)};
  if (type == "explicit") return ExplicitAdmissibility{json_field<std::vector<double>>(j, "values", "admissibility")};
  throw ParseError("admissibility.type: unknown variant '" + type + "'");
}

}  // namespace detail

/// Space from a JSON document:
/// {points: [[...]], mu: [...] | "uniform", potential: {...}, admissibility: {...}}.
/// "uniform" gives every point weight 1.
inline DiscreteSpace space_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("space: expected a JSON object");
  const auto points = detail::json_field<std::vector<std::vector<double>>>(j, "points", "space");
  if (points.empty()) throw ParseError("space.points: empty");
  std::vector<double> mu;
  if (!j.contains("mu")) throw ParseError("space: missing field 'mu'");
  if (j["mu"].is_string()) {
    if (j["mu"].get<std::string>() != "uniform") throw ParseError("space.mu: expected an array or \"uniform\"");
    mu.assign(points.size(), 1.0);
  } else {
    mu = detail::json_field<std::vector<double>>(j, "mu", "space");
  }
  if (!j.contains("potential")) throw ParseError("space: missing field 'potential'");
  if (!j.contains("admissibility")) throw ParseError("space: missing field 'admissibility'");
  return build_space(points, std::move(mu), detail::parse_potential(j["potential"]),
                     detail::parse_admissibility(j["admissibility"]));
}

inline nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

inline DiscreteSpace load_space(const std::string& path) {
  try {
    return space_from_json(read_json_file(path));
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

/// Tent function from CSV lines "node,value" (a header line and '#' comments are skipped).
inline TentFunction<double> load_function_csv(std::istream& in, std::size_t nodes) {
  TentFunction<double> f(nodes);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    std::size_t node = 0;
    double value = 0.0;
    if (!(row >> node >> value)) {
      if (lineno == 1) continue;
      throw ParseError("function csv line " + std::to_string(lineno) + ": expected 'node,value'");
    }
    if (node >= nodes) throw ParseError("function csv line " + std::to_string(lineno) + ": node index out of range");
    f.values[node] = value;
  }
  return f;
}

inline TentFunction<double> load_function_csv(const std::string& path, std::size_t nodes) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return load_function_csv(in, nodes);
}

inline void write_function_csv(std::ostream& out, const TentFunction<double>& f) {
  out << "node,value\n";
  out.precision(17);
  for (NodeIndex v = 0; v < f.size(); ++v)
    if (f[v] != 0.0) out << v << ',' << f[v] << '\n';
}

}  // namespace tentlab

#endif  // TENTLAB_IO_HPP
