#include "divkit/entropy_transport.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "divkit/cone_cost.hpp"

namespace divkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> sorted_masses(const DiscreteMeasure& mu) {
  auto atoms = mu.atoms();
  std::sort(atoms.begin(), atoms.end(),
            [](const DiscreteMeasure::Atom& a, const DiscreteMeasure::Atom& b) {
              return a.index < b.index;
            });
  std::vector<double> m;
  m.reserve(atoms.size());
  for (const auto& a : atoms) m.push_back(a.mass);
  return m;
}

void check_dims(const ETProblem& p, const TransportPlan& plan, const char* who) {
  if (plan.rows != p.rows() || plan.cols != p.cols() ||
      plan.gamma.size() != plan.rows * plan.cols)
    throw std::invalid_argument(std::string(who) + ": plan dimensions mismatch");
  for (double g : plan.gamma)
    if (std::isnan(g) || std::isinf(g) || g < 0.0)
      throw std::invalid_argument(std::string(who) + ": plan entries must be finite and >= 0");
}

// Cone cost of one plan entry; power-like entropies take the closed form.
double leg_cost(const EntropyDescriptor& F, double c, double a, double b) {
  if (!F.is_reversed_view() && F.family() == EntropyFamily::PowerLike && !std::isinf(c))
    return h_p_cone(F.params()[0], std::sqrt(c), a, b).as_double();
  return h_cost_primal(F, c, a, b).as_double();
}

}  // namespace

TransportPlan TransportPlan::zeros(std::size_t m, std::size_t n) {
  TransportPlan p;
  p.rows = m;
  p.cols = n;
  p.gamma.assign(m * n, 0.0);
  return p;
}

ETProblem::ETProblem(EntropyDescriptor F, std::vector<std::vector<double>> cost,
                     const DiscreteMeasure& mu1, const DiscreteMeasure& mu2, ETForm form)
    : entropy_(std::move(F)),
      cost_(std::move(cost)),
      r_(sorted_masses(mu1)),
      t_(sorted_masses(mu2)),
      form_(form) {
  if (r_.empty() || t_.empty())
    throw std::invalid_argument("ETProblem: measures must have atoms");
  for (double m : r_)
    if (!(m > 0.0)) throw std::invalid_argument("ETProblem: mu1 masses must be > 0");
  for (double m : t_)
    if (!(m > 0.0)) throw std::invalid_argument("ETProblem: mu2 masses must be > 0");
  if (cost_.size() != r_.size())
    throw std::invalid_argument("ETProblem: cost rows must match mu1 atoms");
  bool any_finite = false;
  for (const auto& row : cost_) {
    if (row.size() != t_.size())
      throw std::invalid_argument("ETProblem: cost columns must match mu2 atoms");
    for (double c : row) {
      if (std::isnan(c) || c < 0.0)
        throw std::invalid_argument("ETProblem: costs must be >= 0");
      if (!std::isinf(c)) any_finite = true;
    }
  }
  if (!any_finite) throw std::invalid_argument("ETProblem: cost is identically +inf");
  if (form_ == ETForm::Energy && !entropy_.recession_constant().is_infinite())
    throw std::invalid_argument(
        "ETProblem: the energy form needs a superlinear entropy; use the homogeneous form");
}

ExtendedValue energy(const ETProblem& problem, const TransportPlan& plan) {
  if (problem.form() != ETForm::Energy)
    throw std::logic_error("energy: problem was built for the homogeneous form");
  check_dims(problem, plan, "energy");

  const std::size_t m = problem.rows(), n = problem.cols();
  std::vector<double> sigma(m, 0.0), tau(n, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      sigma[i] += plan.at(i, j);
      tau[j] += plan.at(i, j);
    }

  ExtendedValue total;
  for (std::size_t i = 0; i < m; ++i)
    total += perspective(problem.entropy(), sigma[i], problem.masses1()[i]);
  for (std::size_t j = 0; j < n; ++j)
    total += perspective(problem.entropy(), tau[j], problem.masses2()[j]);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double g = plan.at(i, j);
      if (g == 0.0) continue;  // blocked routes cost nothing when unused
      const double c = problem.cost()[i][j];
      if (std::isinf(c)) return ExtendedValue::infinity();
      total += ExtendedValue::finite(c * g);
    }
  return total;
}

ExtendedValue h_functional(const ETProblem& problem, const TransportPlan& plan) {
  check_dims(problem, plan, "h_functional");

  const std::size_t m = problem.rows(), n = problem.cols();
  std::vector<double> sigma(m, 0.0), tau(n, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      sigma[i] += plan.at(i, j);
      tau[j] += plan.at(i, j);
    }
  for (double s : sigma)
    if (!(s > 0.0))
      throw std::invalid_argument("h_functional: every plan row needs positive mass");
  for (double s : tau)
    if (!(s > 0.0))
      throw std::invalid_argument("h_functional: every plan column needs positive mass");

  ExtendedValue total;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double g = plan.at(i, j);
      if (g == 0.0) continue;
      const double c = problem.cost()[i][j];
      const double r = problem.masses1()[i] / sigma[i];
      const double t = problem.masses2()[j] / tau[j];
      if (std::isinf(c)) {
        const double f0 = problem.entropy().at_zero().as_double();
        total += ExtendedValue::from_double(f0 * (r + t)).scaled(g);
        continue;
      }
      total += ExtendedValue::from_double(leg_cost(problem.entropy(), c, r, t)).scaled(g);
    }
  return total;
}

// ---------------------------------------------------------------------------
// Solver

namespace {

struct WorkingState {
  const ETProblem* prob;
  std::vector<char> blocked;  // inf-cost entries, forced to 0

  double objective(const std::vector<double>& g) const {
    TransportPlan plan;
    plan.rows = prob->rows();
    plan.cols = prob->cols();
    plan.gamma = g;
    return energy(*prob, plan).as_double();
  }
};

bool smooth_family(const EntropyDescriptor& F) {
  if (F.is_reversed_view()) return false;
  switch (F.family()) {
    case EntropyFamily::PowerLike:
    case EntropyFamily::PowerLog:
    case EntropyFamily::DoublePower:
      return true;
    default:
      return false;
  }
}

// Gradient of the energy: dE/dg_ij = F'(sigma_i / r_i) + F'(tau_j / t_j) + c_ij,
// with a large finite surrogate where the slope runs to -inf at 0.
void energy_gradient(const ETProblem& p, const std::vector<double>& g,
                     std::vector<double>& grad) {
  const std::size_t m = p.rows(), n = p.cols();
  std::vector<double> sigma(m, 0.0), tau(n, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      sigma[i] += g[i * n + j];
      tau[j] += g[i * n + j];
    }
  std::vector<double> ds(m), dt(n);
  for (std::size_t i = 0; i < m; ++i) {
    double d = derivative(p.entropy(), sigma[i] / p.masses1()[i]);
    ds[i] = std::isinf(d) ? (d < 0 ? -1e15 : 1e15) : d;
  }
  for (std::size_t j = 0; j < n; ++j) {
    double d = derivative(p.entropy(), tau[j] / p.masses2()[j]);
    dt[j] = std::isinf(d) ? (d < 0 ? -1e15 : 1e15) : d;
  }
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j)
      grad[i * n + j] = ds[i] + dt[j] + (std::isinf(p.cost()[i][j]) ? 0.0 : p.cost()[i][j]);
}

double projected_gradient_norm(const std::vector<double>& g, const std::vector<double>& grad,
                               const std::vector<char>& blocked) {
  double norm2 = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (blocked[k]) continue;
    const double pg = g[k] > 0.0 ? grad[k] : std::min(grad[k], 0.0);
    norm2 += pg * pg;
  }
  return std::sqrt(norm2);
}

struct StartOutcome {
  std::vector<double> g;
  double value = kInf;
  bool converged = false;
  bool stalled = false;
  int iterations = 0;
  double pg_norm = kInf;
};

StartOutcome run_projected_gradient(const WorkingState& W, std::vector<double> g,
                                    const SolveOptions& opts) {
  const ETProblem& p = *W.prob;
  StartOutcome out;
  double value = W.objective(g);
  if (std::isinf(value)) {
    out.value = kInf;
    return out;
  }

  std::vector<double> grad(g.size()), trial(g.size());
  double step = 1.0;
  int tiny_streak = 0;

  for (int it = 1; it <= opts.max_iters; ++it) {
    out.iterations = it;
    energy_gradient(p, g, grad);
    for (std::size_t k = 0; k < g.size(); ++k)
      if (W.blocked[k]) grad[k] = 0.0;
    out.pg_norm = projected_gradient_norm(g, grad, W.blocked);
    if (out.pg_norm < opts.tol) {
      out.converged = true;
      break;
    }

    bool accepted = false;
    for (int half = 0; half <= 60; ++half) {
      double decrease = 0.0;
      for (std::size_t k = 0; k < g.size(); ++k) {
        trial[k] = W.blocked[k] ? 0.0 : std::max(g[k] - step * grad[k], 0.0);
        decrease += grad[k] * (g[k] - trial[k]);
      }
      const double tv = W.objective(trial);
      if (std::isfinite(tv) && tv <= value - 1e-4 * decrease) {
        const double improvement = value - tv;
        tiny_streak = improvement < 1e-15 * (1.0 + std::fabs(value)) ? tiny_streak + 1 : 0;
        g.swap(trial);
        value = tv;
        step *= 1.5;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted || tiny_streak >= 50) {
      out.stalled = !accepted || tiny_streak >= 50;
      break;
    }
  }
  out.g = std::move(g);
  out.value = value;
  return out;
}

StartOutcome run_coordinate_descent(const WorkingState& W, std::vector<double> g,
                                    const SolveOptions& opts, double bound) {
  const ETProblem& p = *W.prob;
  const std::size_t n = p.cols();
  StartOutcome out;
  double value = W.objective(g);

  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  int sweeps = 0;
  double last_move = kInf;
  const int max_sweeps = std::min(opts.max_iters, 2000);
  for (; sweeps < max_sweeps; ++sweeps) {
    last_move = 0.0;
    for (std::size_t i = 0; i < p.rows(); ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const std::size_t k = i * n + j;
        if (W.blocked[k]) continue;
        const auto slice = [&](double x) {
          const double old = g[k];
          g[k] = x;
          const double v = W.objective(g);
          g[k] = old;
          return v;
        };
        double lo = 0.0, hi = bound;
        double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
        double f1 = slice(x1), f2 = slice(x2);
        for (int t = 0; t < 80 && (hi - lo) > 1e-12 * (1.0 + bound); ++t) {
          if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = slice(x1);
          } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = slice(x2);
          }
        }
        double best_x = f1 < f2 ? x1 : x2;
        double best_f = std::min(f1, f2);
        if (slice(0.0) <= best_f) {
          best_x = 0.0;
          best_f = slice(0.0);
        }
        if (best_f < value) {
          last_move = std::max(last_move, std::fabs(best_x - g[k]));
          g[k] = best_x;
          value = best_f;
        }
      }
    ++out.iterations;
    if (last_move <= 1e-10 * (1.0 + bound)) {
      out.converged = true;
      break;
    }
  }
  out.g = std::move(g);
  out.value = value;
  out.pg_norm = std::isinf(last_move) ? 0.0 : last_move;
  return out;
}

}  // namespace

SolveResult solve(const ETProblem& problem, const SolveOptions& opts) {
  if (problem.form() != ETForm::Energy)
    throw std::logic_error("solve: problem was built for the homogeneous form");

  const std::size_t m = problem.rows(), n = problem.cols();
  WorkingState W;
  W.prob = &problem;
  W.blocked.assign(m * n, 0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (std::isinf(problem.cost()[i][j])) W.blocked[i * n + j] = 1;

  double mass1 = 0.0, mass2 = 0.0;
  for (double v : problem.masses1()) mass1 += v;
  for (double v : problem.masses2()) mass2 += v;
  const double bound = 3.0 * (mass1 + mass2);

  // Three seeds: near-diagonal matching, independent coupling, near-zero.
  std::vector<std::vector<double>> starts(3, std::vector<double>(m * n, 0.0));
  for (std::size_t i = 0; i < std::min(m, n); ++i)
    starts[0][i * n + i] =
        std::sqrt(problem.masses1()[i] * problem.masses2()[i]);
  const double scale = std::sqrt(mass1 * mass2);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j)
      starts[1][i * n + j] = problem.masses1()[i] * problem.masses2()[j] / scale;
  starts[2].assign(m * n, 1e-6);
  for (auto& s : starts)
    for (std::size_t k = 0; k < s.size(); ++k)
      if (W.blocked[k]) s[k] = 0.0;

  const bool smooth = smooth_family(problem.entropy());
  SolveResult result;
  result.plan = TransportPlan::zeros(m, n);
  result.value = ExtendedValue::infinity();
  StartOutcome best;
  int best_start = -1;
  for (int s = 0; s < 3; ++s) {
    StartOutcome cand = smooth ? run_projected_gradient(W, starts[s], opts)
                               : run_coordinate_descent(W, starts[s], opts, bound);
    if (cand.value < best.value || best_start < 0) {
      best = std::move(cand);
      best_start = s;
    }
  }

  result.report.best_start = best_start;
  if (std::isinf(best.value) || best.g.empty()) {
    result.report.infeasible = true;
    return result;
  }
  result.plan.gamma = best.g;
  result.value = ExtendedValue::from_double(best.value);
  result.report.converged = best.converged;
  result.report.stalled = best.stalled;
  result.report.iterations = best.iterations;
  result.report.projected_gradient_norm = best.pg_norm;
  return result;
}

// ---------------------------------------------------------------------------
// Brute force oracles

BruteForceResult brute_force_et(const ETProblem& problem, int grid_per_entry) {
  if (problem.form() != ETForm::Energy)
    throw std::logic_error("brute_force_et: problem was built for the homogeneous form");
  const std::size_t m = problem.rows(), n = problem.cols();
  const std::size_t cells = m * n;
  if (cells > 4)
    throw std::invalid_argument("brute_force_et: limited to plans with <= 4 entries");
  if (grid_per_entry < 2)
    throw std::invalid_argument("brute_force_et: need >= 2 grid values per entry");

  double mass1 = 0.0, mass2 = 0.0;
  for (double v : problem.masses1()) mass1 += v;
  for (double v : problem.masses2()) mass2 += v;
  const double B = 3.0 * (mass1 + mass2);
  const double step = B / (grid_per_entry - 1);

  BruteForceResult out;
  out.grid_step = step;
  out.min_energy = kInf;
  out.min_h = kInf;
  out.argmin_energy = TransportPlan::zeros(m, n);
  out.argmin_h = TransportPlan::zeros(m, n);

  TransportPlan plan = TransportPlan::zeros(m, n);
  std::vector<int> idx(cells, 0);
  while (true) {
    for (std::size_t k = 0; k < cells; ++k) plan.gamma[k] = idx[k] * step;

    const double e = energy(problem, plan).as_double();
    if (e < out.min_energy) {
      out.min_energy = e;
      out.argmin_energy = plan;
    }

    bool positive_sums = true;
    for (std::size_t i = 0; i < m && positive_sums; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += plan.at(i, j);
      positive_sums = s > 0.0;
    }
    for (std::size_t j = 0; j < n && positive_sums; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < m; ++i) s += plan.at(i, j);
      positive_sums = s > 0.0;
    }
    if (positive_sums) {
      const double h = h_functional(problem, plan).as_double();
      if (h < out.min_h) {
        out.min_h = h;
        out.argmin_h = plan;
      }
    }

    std::size_t carry = 0;
    while (carry < cells && ++idx[carry] == grid_per_entry) idx[carry++] = 0;
    if (carry == cells) break;
  }
  return out;
}

double brute_force_refined(const ETProblem& problem, int initial_grid, int levels) {
  const std::size_t m = problem.rows(), n = problem.cols();
  const std::size_t cells = m * n;
  if (cells > 4)
    throw std::invalid_argument("brute_force_refined: limited to plans with <= 4 entries");

  double mass1 = 0.0, mass2 = 0.0;
  for (double v : problem.masses1()) mass1 += v;
  for (double v : problem.masses2()) mass2 += v;
  const double B = 3.0 * (mass1 + mass2);

  std::vector<double> lo(cells, 0.0), hi(cells, B);
  std::vector<double> center(cells, 0.0);
  double best = kInf;
  int grid = std::max(initial_grid, 3);

  TransportPlan plan = TransportPlan::zeros(m, n);
  for (int level = 0; level < levels; ++level) {
    std::vector<int> idx(cells, 0);
    std::vector<double> step(cells);
    for (std::size_t k = 0; k < cells; ++k) step[k] = (hi[k] - lo[k]) / (grid - 1);
    while (true) {
      for (std::size_t k = 0; k < cells; ++k) plan.gamma[k] = lo[k] + idx[k] * step[k];
      const double e = energy(problem, plan).as_double();
      if (e < best) {
        best = e;
        center = plan.gamma;
      }
      std::size_t carry = 0;
      while (carry < cells && ++idx[carry] == grid) idx[carry++] = 0;
      if (carry == cells) break;
    }
    for (std::size_t k = 0; k < cells; ++k) {
      const double span = 1.5 * step[k];
      lo[k] = std::max(center[k] - span, 0.0);
      hi[k] = std::min(center[k] + span, B);
    }
    grid = 7;
  }
  return best;
}

}  // namespace divkit
