#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "divkit/cone_cost.hpp"
#include "divkit/dynamics.hpp"
#include "divkit/entropy.hpp"
#include "divkit/entropy_transport.hpp"
#include "divkit/io.hpp"
#include "divkit/marginal_perspective.hpp"
#include "divkit/metric_check.hpp"

namespace {

using namespace divkit;

std::string fmt(double v) {
  if (std::isinf(v)) return "inf";
  std::ostringstream o;
  o << std::setprecision(12) << v;
  return o.str();
}

std::string fmt(const ExtendedValue& v) {
  return v.is_infinite() ? std::string("inf") : fmt(v.finite_value());
}

void write_out(const std::string& target, const std::string& content) {
  if (target == "-") {
    std::cout << content << '\n';
    return;
  }
  std::ofstream out(target);
  if (!out) throw std::runtime_error(target + ": cannot write");
  out << content << '\n';
}

std::uint64_t parse_seed(const std::string& s) { return std::stoull(s, nullptr, 0); }

const char* direction_name(Direction d) {
  switch (d) {
    case Direction::Decreasing: return "decreasing";
    case Direction::Increasing: return "increasing";
    case Direction::Mixed: return "mixed";
    case Direction::Stationary: return "stationary";
  }
  return "?";
}

struct DivergenceArgs {
  std::string entropy, mu1, mu2;
};

int run_divergence(const DivergenceArgs& a) {
  const EntropyDescriptor F = parse_entropy_spec(a.entropy);
  const EntropyDescriptor R = reverse(F);
  const DiscreteMeasure m1 = load_measure_json(a.mu1);
  const DiscreteMeasure m2 = load_measure_json(a.mu2);
  const MarginalPerspective H(F);

  std::map<int, std::pair<double, double>> joint;
  for (const auto& atom : m1.atoms()) joint[atom.index].first = atom.mass;
  for (const auto& atom : m2.atoms()) joint[atom.index].second = atom.mass;

  std::cout << "# divergence entropy=" << a.entropy << " mu1=" << a.mu1 << " mu2=" << a.mu2
            << " symmetric_source=" << H.source() << '\n';
  std::cout << "index,r,t,forward,reverse,symmetric\n";
  ExtendedValue fwd, rev, sym;
  for (const auto& [index, masses] : joint) {
    const auto [r, t] = masses;
    const ExtendedValue f = perspective(F, r, t);
    const ExtendedValue g = perspective(R, r, t);
    const ExtendedValue h = H(r, t);
    fwd += f;
    rev += g;
    sym += h;
    std::cout << index << ',' << fmt(r) << ',' << fmt(t) << ',' << fmt(f) << ',' << fmt(g)
              << ',' << fmt(h) << '\n';
  }
  std::cout << "total,,," << fmt(fwd) << ',' << fmt(rev) << ',' << fmt(sym) << '\n';
  return 0;
}

struct IterateArgs {
  std::string entropy;
  double a = 1.0;
  int max_iters = 500;
  double tol = 1e-8;
  int nodes = 512;
  double s_max = 64.0;
  int stride = 16;
};

int run_iterate(const IterateArgs& args) {
  if (args.stride < 1) throw std::invalid_argument("--stride must be >= 1");
  const EntropyDescriptor F = parse_entropy_spec(args.entropy);
  const SampledFunction seed = SampledFunction::from_entropy(F, args.nodes, args.s_max);
  const auto [limit, report] = iterate_T(seed, args.a, args.max_iters, args.tol);
  (void)limit;

  std::cout << "# iterate entropy=" << args.entropy << " a=" << fmt(args.a)
            << " nodes=" << args.nodes << " s_max=" << fmt(args.s_max)
            << " tol=" << fmt(args.tol) << " max_iters=" << args.max_iters << '\n';
  std::cout << "iter,s,value\n";
  const auto emit = [&](int iter, const SampledFunction& f) {
    const auto& grid = f.grid();
    const auto vals = f.values();
    for (std::size_t i = 0; i < grid.size(); i += args.stride)
      std::cout << iter << ',' << fmt(grid[i]) << ',' << fmt(vals[i]) << '\n';
    if ((grid.size() - 1) % args.stride != 0)
      std::cout << iter << ',' << fmt(grid.back()) << ',' << fmt(vals.back()) << '\n';
  };
  emit(0, seed);
  SampledFunction current = seed;
  for (int k = 1; k <= report.iterations; ++k) {
    current = apply_T(current, args.a);
    emit(k, current);
  }

  std::cout << "# converged=" << (report.converged ? "true" : "false")
            << " diverged=" << (report.diverged ? "true" : "false")
            << " iterations=" << report.iterations
            << " direction=" << direction_name(report.direction)
            << " fitted_constant=" << fmt(report.fitted_constant) << '\n';
  return report.converged && !report.diverged ? 0 : 1;
}

struct MetricAuditArgs {
  std::string entropy;
  double a = 0.5;
  int resolution = 200;
  int random_pairs = 1000;
  std::string seed = "0x5EED";
  bool kafka = false;
  std::string json_out;
};

int run_metric_audit(const MetricAuditArgs& args) {
  const EntropyDescriptor F = parse_entropy_spec(args.entropy);
  const MarginalPerspective Hm(F);
  const CostlessEvaluator H = Hm;
  const std::uint64_t seed = parse_seed(args.seed);

  std::cout << "# metric-audit entropy=" << args.entropy << " a=" << fmt(args.a)
            << " resolution=" << args.resolution << " random_pairs=" << args.random_pairs
            << " seed=" << args.seed << " symmetric_source=" << Hm.source() << '\n';
  const TriangleReport report =
      check_costless_triangle(H, args.a, args.resolution, args.random_pairs, seed);
  std::cout << "result: " << (report.passed ? "PASS" : "FAIL") << '\n';
  std::cout << "worst_violation: " << fmt(report.worst_violation) << '\n';
  std::cout << "tested: " << report.tested << " skipped: " << report.skipped << '\n';
  if (report.witness)
    std::cout << "witness: u=" << fmt(report.witness->u) << " v=" << fmt(report.witness->v)
              << " lhs=" << fmt(report.witness->lhs) << " rhs=" << fmt(report.witness->rhs)
              << '\n';
  if (report.necessary_condition_failed)
    std::cout << "necessary_condition_failed: the cost of a vanishing mass is infinite\n";

  if (args.kafka) {
    const KafkaReport k = kafka_certificate(H, args.a);
    std::cout << "kafka_certificate: " << (k.certificate ? "yes" : "no")
              << " max_increase=" << fmt(k.max_increase) << '\n';
  }
  if (!args.json_out.empty()) write_out(args.json_out, to_json(report));
  return report.passed ? 0 : 1;
}

struct ConeArgs {
  double p = 2.0;
  std::string space;
  std::string builtin = "planar5";
  int samples = 10000;
  std::string seed = "0x5EED";
  bool final_inequality = false;
  int u_points = 100;
  int v_points = 100;
};

FiniteMetricSpace builtin_space(const std::string& name) {
  if (name == "planar5")
    return FiniteMetricSpace::planar({{0, 0}, {1, 0}, {0, 1}, {3, 1}, {0.3, 0.7}});
  if (name == "path5") return FiniteMetricSpace::path(5);
  if (name == "point") return FiniteMetricSpace::single_point();
  throw std::invalid_argument("unknown builtin space '" + name + "'");
}

int run_cone(const ConeArgs& args) {
  if (args.final_inequality) {
    std::cout << "# cone final-inequality p=" << fmt(args.p) << " u_points=" << args.u_points
              << " v_points=" << args.v_points << '\n';
    const FinalInequalityReport rep = final_inequality_check(args.p, args.u_points, args.v_points);
    std::cout << "result: " << (rep.passed ? "PASS" : "FAIL") << '\n';
    std::cout << "lhs_sup: " << fmt(rep.lhs_sup) << " rhs_min: " << fmt(rep.rhs_min)
              << " predicted_sup: " << fmt(rep.predicted_sup) << '\n';
    return rep.passed ? 0 : 1;
  }
  if (args.p >= 1.0) {
    const FiniteMetricSpace X =
        args.space.empty() ? builtin_space(args.builtin) : load_metric_csv(args.space);
    std::cout << "# cone triangle p=" << fmt(args.p)
              << " space=" << (args.space.empty() ? args.builtin : args.space)
              << " points=" << X.size() << " samples=" << args.samples << " seed=" << args.seed
              << '\n';
    const ConeTriangleReport rep =
        check_cone_triangle(args.p, X, args.samples, parse_seed(args.seed));
    std::cout << "result: " << (rep.passed ? "PASS" : "FAIL") << '\n';
    std::cout << "worst_violation: " << fmt(rep.worst_violation) << " tested: " << rep.tested
              << '\n';
    if (!rep.passed) {
      std::cout << "witness_points: " << rep.witness_points[0] << ',' << rep.witness_points[1]
                << ',' << rep.witness_points[2] << '\n';
      std::cout << "witness_radii: " << fmt(rep.witness_radii[0]) << ','
                << fmt(rep.witness_radii[1]) << ',' << fmt(rep.witness_radii[2]) << '\n';
    }
    return rep.passed ? 0 : 1;
  }
  std::cout << "# cone counterexample p=" << fmt(args.p) << '\n';
  const ConeCounterexample cex = counterexample_p_below_one(args.p);
  std::cout << "radii: " << fmt(cex.r) << ',' << fmt(cex.s) << ',' << fmt(cex.t) << '\n';
  std::cout << "distances: d12=" << fmt(cex.d12) << " d23=" << fmt(cex.d23)
            << " d13=" << fmt(cex.d13) << '\n';
  std::cout << "long_leg: " << fmt(cex.lhs) << " two_legs: " << fmt(cex.rhs)
            << " margin: " << fmt(cex.margin) << '\n';
  std::cout << "result: " << (cex.margin > 0 ? "VIOLATED (as expected below exponent 1)" : "no violation found")
            << '\n';
  return cex.margin > 0 ? 0 : 1;
}

struct EtSolveArgs {
  std::string problem;
  double tol = 1e-8;
  int max_iters = 100000;
  std::string seed = "0x5EED";
  int brute_force = 0;
  std::string json_out = "-";
};

int run_et_solve(const EtSolveArgs& args) {
  const std::string& path = args.problem;
  if (path.empty()) throw std::invalid_argument("et-solve needs a problem file");
  const ETProblem problem = load_et_problem_json(path);

  SolveOptions opts;
  opts.tol = args.tol;
  opts.max_iters = args.max_iters;
  opts.seed = parse_seed(args.seed);

  std::cout << "# et-solve problem=" << path << " tol=" << fmt(opts.tol)
            << " max_iters=" << opts.max_iters << " seed=" << args.seed << '\n';
  const SolveResult result = solve(problem, opts);
  std::cout << "value: " << fmt(result.value) << '\n';
  std::cout << "converged: " << (result.report.converged ? "true" : "false")
            << " iterations: " << result.report.iterations
            << " projected_gradient_norm: " << fmt(result.report.projected_gradient_norm)
            << '\n';
  if (result.report.infeasible) std::cout << "infeasible: no plan with finite cost\n";

  if (args.brute_force > 0) {
    const BruteForceResult bf = brute_force_et(problem, args.brute_force);
    std::cout << "brute_force: min_energy=" << fmt(bf.min_energy)
              << " min_homogeneous=" << fmt(bf.min_h) << " grid_step=" << fmt(bf.grid_step)
              << '\n';
  }
  if (!args.json_out.empty()) write_out(args.json_out, to_json(result));
  return !result.report.infeasible && result.report.converged ? 0 : 1;
}

struct PlotDataArgs {
  std::string family;
  std::string params;
  std::vector<std::string> entropies;
  double s_max = 4.0;
  int samples = 81;
};

int run_plot_data(const PlotDataArgs& args) {
  if (args.samples < 2) throw std::invalid_argument("--samples must be >= 2");
  struct Curve {
    std::string family, param;
    EntropyDescriptor F;
  };
  std::vector<Curve> curves;
  if (!args.family.empty()) {
    std::stringstream tokens(args.params);
    std::string tok;
    while (std::getline(tokens, tok, ',')) {
      // two-parameter families write a curve token as p/q
      std::string spec_params = tok;
      std::replace(spec_params.begin(), spec_params.end(), '/', ',');
      curves.push_back({args.family, tok, parse_entropy_spec(args.family + ":" + spec_params)});
    }
    if (curves.empty()) throw std::invalid_argument("--family needs --params");
  }
  for (const auto& spec : args.entropies) {
    const auto colon = spec.find(':');
    curves.push_back({spec.substr(0, colon),
                      colon == std::string::npos ? "" : spec.substr(colon + 1),
                      parse_entropy_spec(spec)});
  }
  if (curves.empty())
    throw std::invalid_argument("plot-data needs --family with --params, or --entropy");

  std::cout << "# plot-data s_max=" << fmt(args.s_max) << " samples=" << args.samples << '\n';
  std::cout << "family,param,s,F\n";
  for (const auto& c : curves)
    for (int i = 0; i < args.samples; ++i) {
      const double s = args.s_max * i / (args.samples - 1);
      std::cout << c.family << ',' << c.param << ',' << fmt(s) << ','
                << fmt(evaluate(c.F, s)) << '\n';
    }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical toolkit for f-divergences, marginal perspective costs,\n"
               "divergence dynamics, cone costs, and discrete entropy-transport."};
  app.require_subcommand(1);

  DivergenceArgs div;
  auto* cmd_div = app.add_subcommand(
      "divergence", "Forward, reverse, and symmetric divergence between two measures");
  cmd_div->add_option("--entropy", div.entropy, "entropy spec, family:params")->required();
  cmd_div->add_option("--mu1", div.mu1, "first measure (JSON)")->required();
  cmd_div->add_option("--mu2", div.mu2, "second measure (JSON)")->required();

  IterateArgs it;
  auto* cmd_it = app.add_subcommand("iterate", "Iterate the symmetrization map on an entropy");
  cmd_it->add_option("--entropy", it.entropy, "entropy spec")->required();
  cmd_it->add_option("--a", it.a, "map exponent in (0,1]");
  cmd_it->add_option("--max-iters", it.max_iters, "sweep budget");
  cmd_it->add_option("--tol", it.tol, "sup-change stop tolerance");
  cmd_it->add_option("--nodes", it.nodes, "grid nodes");
  cmd_it->add_option("--s-max", it.s_max, "grid upper end");
  cmd_it->add_option("--stride", it.stride, "emit every k-th node in the trace");

  MetricAuditArgs ma;
  auto* cmd_ma = app.add_subcommand("metric-audit",
                                    "Triangle inequality audit for the symmetric divergence");
  cmd_ma->add_option("--entropy", ma.entropy, "entropy spec")->required();
  cmd_ma->add_option("--a", ma.a, "candidate metric power");
  cmd_ma->add_option("--resolution", ma.resolution, "grid resolution");
  cmd_ma->add_option("--random-pairs", ma.random_pairs, "extra random pairs");
  cmd_ma->add_option("--seed", ma.seed, "random seed");
  cmd_ma->add_flag("--kafka", ma.kafka, "also run the monotone-profile certificate");
  cmd_ma->add_option("--json", ma.json_out, "write the report as JSON ('-' for stdout)");

  ConeArgs cone;
  auto* cmd_cone = app.add_subcommand("cone", "Cone-cost triangle checks and counterexamples");
  cmd_cone->add_option("--p", cone.p, "power-family exponent")->required();
  cmd_cone->add_option("--space", cone.space, "distance matrix CSV");
  cmd_cone->add_option("--builtin", cone.builtin, "planar5 | path5 | point");
  cmd_cone->add_option("--samples", cone.samples, "random triples");
  cmd_cone->add_option("--seed", cone.seed, "random seed");
  cmd_cone->add_flag("--final-inequality", cone.final_inequality,
                     "audit the endpoint comparison inequality instead");
  cmd_cone->add_option("--u-points", cone.u_points, "left grid size");
  cmd_cone->add_option("--v-points", cone.v_points, "right grid size");

  EtSolveArgs et;
  auto* cmd_et = app.add_subcommand("et-solve", "Solve a discrete entropy-transport problem");
  cmd_et->add_option("problem,--problem", et.problem, "problem file (JSON)");
  cmd_et->add_option("--tol", et.tol, "projected-gradient tolerance");
  cmd_et->add_option("--max-iters", et.max_iters, "iteration budget");
  cmd_et->add_option("--seed", et.seed, "random seed");
  cmd_et->add_option("--brute-force", et.brute_force,
                     "also sweep a brute-force grid with this many values per entry");
  cmd_et->add_option("--json", et.json_out, "solution JSON target ('-' for stdout)");

  PlotDataArgs pd;
  auto* cmd_pd = app.add_subcommand("plot-data", "Emit sampled entropy curves as CSV");
  cmd_pd->add_option("--family", pd.family, "single-parameter family name");
  cmd_pd->add_option("--params", pd.params, "comma-separated parameter list");
  cmd_pd->add_option("--entropy", pd.entropies, "full entropy spec (repeatable)");
  cmd_pd->add_option("--s-max", pd.s_max, "curve upper end");
  cmd_pd->add_option("--samples", pd.samples, "points per curve");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_div->parsed()) return run_divergence(div);
    if (cmd_it->parsed()) return run_iterate(it);
    if (cmd_ma->parsed()) return run_metric_audit(ma);
    if (cmd_cone->parsed()) return run_cone(cone);
    if (cmd_et->parsed()) return run_et_solve(et);
    if (cmd_pd->parsed()) return run_plot_data(pd);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
