#include "divkit/io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "divkit/marginal_perspective.hpp"

namespace divkit {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw std::runtime_error(path + ": " + what);
}

std::ifstream open_or_fail(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(path, "cannot open file");
  return in;
}

json parse_json_file(const std::string& path) {
  auto in = open_or_fail(path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    fail(path, e.what());
  }
  if (!doc.is_object()) fail(path, "top level must be a JSON object");
  if (!doc.contains("schema") || doc["schema"] != 1)
    fail(path, "missing or unsupported \"schema\" (expected 1)");
  return doc;
}

// Numbers plus the "inf" token.
double number_or_inf(const json& v, const std::string& path) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string() && v.get<std::string>() == "inf")
    return std::numeric_limits<double>::infinity();
  fail(path, "expected a number or \"inf\", got " + v.dump());
}

json json_number(double x) {
  if (std::isinf(x)) return json("inf");
  return json(x);
}

double parse_param(const std::string& token) {
  if (token == "inf") return std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(token, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (token.empty() || used != token.size())
    throw std::invalid_argument("bad numeric parameter '" + token + "'");
  return v;
}

EntropyDescriptor make_entropy(const std::string& family, const std::vector<double>& p) {
  const auto arity = [&](std::size_t n) {
    if (p.size() != n)
      throw std::invalid_argument("entropy '" + family + "' takes " + std::to_string(n) +
                                  " parameter(s), got " + std::to_string(p.size()));
  };
  if (family == "powerlike") {
    arity(1);
    return EntropyDescriptor::power_like(p[0]);
  }
  if (family == "powerlog") {
    arity(1);
    return EntropyDescriptor::power_log(p[0]);
  }
  if (family == "doublepower") {
    arity(2);
    return EntropyDescriptor::double_power(p[0], p[1]);
  }
  if (family == "chi") {
    arity(1);
    return EntropyDescriptor::chi_alpha(p[0]);
  }
  if (family == "matusita") {
    arity(1);
    return EntropyDescriptor::matusita(p[0]);
  }
  if (family == "indicator") {
    arity(2);
    return EntropyDescriptor::indicator(p[0], p[1]);
  }
  if (family == "tv") {
    if (p.empty()) return EntropyDescriptor::total_variation_scaled(1.0);
    arity(1);
    return EntropyDescriptor::total_variation_scaled(p[0]);
  }
  throw std::invalid_argument("unknown entropy family '" + family + "'");
}

}  // namespace

EntropyDescriptor load_tabulated_entropy(const std::string& path) {
  auto in = open_or_fail(path);
  std::vector<double> s;
  std::vector<ExtendedValue> v;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream row(line);
    std::string s_tok, v_tok, extra;
    if (!(row >> s_tok)) continue;  // blank line
    if (!(row >> v_tok) || (row >> extra))
      fail(path, "line " + std::to_string(lineno) + ": expected 's value'");
    try {
      s.push_back(parse_param(s_tok));
      const double val = parse_param(v_tok);
      v.push_back(std::isinf(val) ? ExtendedValue::infinity() : ExtendedValue::finite(val));
    } catch (const std::exception& e) {
      fail(path, "line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  try {
    return EntropyDescriptor::tabulated(std::move(s), std::move(v));
  } catch (const std::exception& e) {
    fail(path, e.what());
  }
}

EntropyDescriptor parse_entropy_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string family = spec.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (family == "tab") {
    if (rest.empty()) throw std::invalid_argument("tab: needs a file path");
    return load_tabulated_entropy(rest);
  }
  std::vector<double> params;
  std::stringstream tokens(rest);
  std::string tok;
  while (std::getline(tokens, tok, ',')) params.push_back(parse_param(tok));
  return make_entropy(family, params);
}

DiscreteMeasure load_measure_json(const std::string& path) {
  const json doc = parse_json_file(path);
  if (!doc.contains("space") || !doc["space"].is_string())
    fail(path, "missing \"space\" string");
  if (!doc.contains("atoms") || !doc["atoms"].is_array()) fail(path, "missing \"atoms\" array");
  std::vector<DiscreteMeasure::Atom> atoms;
  for (const auto& a : doc["atoms"]) {
    if (!a.is_array() || a.size() != 2 || !a[0].is_number_integer() || !a[1].is_number())
      fail(path, "atoms must be [index, mass] pairs, got " + a.dump());
    atoms.push_back({a[0].get<int>(), a[1].get<double>()});
  }
  try {
    return DiscreteMeasure(doc["space"].get<std::string>(), std::move(atoms));
  } catch (const std::exception& e) {
    fail(path, e.what());
  }
}

FiniteMetricSpace load_metric_csv(const std::string& path) {
  auto in = open_or_fail(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> row;
    std::stringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        fail(path, "line " + std::to_string(lineno) + ": bad number '" + cell + "'");
      }
    }
    rows.push_back(std::move(row));
  }
  try {
    return FiniteMetricSpace(std::move(rows));
  } catch (const std::exception& e) {
    fail(path, e.what());
  }
}

ETProblem load_et_problem_json(const std::string& path, ETForm form) {
  const json doc = parse_json_file(path);
  for (const char* key : {"entropy", "cost", "mu1", "mu2"})
    if (!doc.contains(key)) fail(path, std::string("missing \"") + key + "\"");

  const json& ent = doc["entropy"];
  if (!ent.is_object() || !ent.contains("family") || !ent["family"].is_string())
    fail(path, "\"entropy\" needs a \"family\" string");
  EntropyDescriptor F = EntropyDescriptor::power_like(1.0);
  try {
    const std::string family = ent["family"].get<std::string>();
    if (family == "tab") {
      if (!ent.contains("path") || !ent["path"].is_string())
        fail(path, "tabulated entropy needs a \"path\" string");
      F = load_tabulated_entropy(ent["path"].get<std::string>());
    } else {
      std::vector<double> params;
      if (ent.contains("params"))
        for (const auto& v : ent["params"]) params.push_back(number_or_inf(v, path));
      F = make_entropy(family, params);
    }
  } catch (const std::runtime_error&) {
    throw;
  } catch (const std::exception& e) {
    fail(path, e.what());
  }

  std::vector<std::vector<double>> cost;
  if (!doc["cost"].is_array()) fail(path, "\"cost\" must be a matrix");
  for (const auto& row : doc["cost"]) {
    if (!row.is_array()) fail(path, "\"cost\" must be a matrix");
    std::vector<double> r;
    for (const auto& v : row) r.push_back(number_or_inf(v, path));
    cost.push_back(std::move(r));
  }

  const auto masses = [&](const char* key) {
    if (!doc[key].is_array()) fail(path, std::string("\"") + key + "\" must be an array");
    std::vector<DiscreteMeasure::Atom> atoms;
    int i = 0;
    for (const auto& v : doc[key]) {
      if (!v.is_number()) fail(path, std::string("\"") + key + "\" entries must be numbers");
      atoms.push_back({i++, v.get<double>()});
    }
    return DiscreteMeasure(key, std::move(atoms));
  };

  try {
    return ETProblem(std::move(F), std::move(cost), masses("mu1"), masses("mu2"), form);
  } catch (const std::runtime_error&) {
    throw;
  } catch (const std::exception& e) {
    fail(path, e.what());
  }
}

std::string to_json(const TriangleReport& report) {
  json doc{{"schema", 1},
           {"passed", report.passed},
           {"worst_violation", report.worst_violation},
           {"witness", nullptr},
           {"tested", report.tested},
           {"skipped", report.skipped},
           {"necessary_condition_failed", report.necessary_condition_failed}};
  if (report.witness)
    doc["witness"] = json{{"u", report.witness->u},
                          {"v", report.witness->v},
                          {"lhs", report.witness->lhs},
                          {"rhs", report.witness->rhs}};
  return doc.dump(2);
}

std::string to_json(const SolveResult& result) {
  json plan = json::array();
  for (std::size_t i = 0; i < result.plan.rows; ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < result.plan.cols; ++j) row.push_back(result.plan.at(i, j));
    plan.push_back(std::move(row));
  }
  json doc{{"schema", 1},
           {"value", json_number(result.value.as_double())},
           {"plan", std::move(plan)},
           {"iterations", result.report.iterations},
           {"converged", result.report.converged},
           {"stalled", result.report.stalled},
           {"infeasible", result.report.infeasible},
           {"projected_gradient_norm", result.report.projected_gradient_norm},
           {"best_start", result.report.best_start}};
  return doc.dump(2);
}

std::string h_grid_csv(const EntropyDescriptor& F, const std::vector<double>& points) {
  const auto grid = h_grid(F, points);
  std::ostringstream out;
  out << "r,t,H\n";
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = 0; j < points.size(); ++j) {
      out << points[i] << ',' << points[j] << ',';
      if (grid[i][j].is_infinite())
        out << "inf";
      else
        out << grid[i][j].finite_value();
      out << '\n';
    }
  return out.str();
}

}  // namespace divkit
