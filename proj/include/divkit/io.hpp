#pragma once

#include <string>
#include <vector>

#include "divkit/cone_cost.hpp"
#include "divkit/entropy.hpp"
#include "divkit/entropy_transport.hpp"
#include "divkit/metric_check.hpp"

namespace divkit {

// File loaders and report serializers shared by the command-line tool and the
// tests. JSON documents carry a "schema": 1 field; the string "inf" stands in
// for an infinite value wherever one is meaningful, on input and on output.
// Loaders throw std::runtime_error with the offending path in the message.

// Two-column text, "s value" per line; blank lines and lines starting with
// '#' are skipped, "inf" is allowed in the value column.
EntropyDescriptor load_tabulated_entropy(const std::string& path);

// One-token grammar "family:param1[,param2]":
//   powerlike:p  powerlog:p  doublepower:p,q  chi:alpha  matusita:a
//   indicator:a,b (b may be inf)  tv[:c]  tab:path
EntropyDescriptor parse_entropy_spec(const std::string& spec);

// {"schema": 1, "space": "...", "atoms": [[index, mass], ...]}
DiscreteMeasure load_measure_json(const std::string& path);

// Square comma-separated distance matrix, one row per line; the
// FiniteMetricSpace constructor runs the validation pass.
FiniteMetricSpace load_metric_csv(const std::string& path);

// {"schema": 1, "entropy": {"family": "...", "params": [...]},
//  "cost": [[...]], "mu1": [...], "mu2": [...]}
ETProblem load_et_problem_json(const std::string& path, ETForm form = ETForm::Energy);

std::string to_json(const TriangleReport& report);
std::string to_json(const SolveResult& result);

// "r,t,H" rows over the tensor grid points x points.
std::string h_grid_csv(const EntropyDescriptor& F, const std::vector<double>& points);

}  // namespace divkit
