#pragma once

#include <cstdint>
#include <vector>

#include "divkit/entropy.hpp"
#include "divkit/extended_value.hpp"

namespace divkit {

// Discrete optimal entropy-transport: couple two positive measures through a
// plan gamma, paying entropic penalties on both marginals plus a linear
// transport charge, or equivalently summing two-leg cone costs over the plan.

struct TransportPlan {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> gamma;  // row-major, entries >= 0

  static TransportPlan zeros(std::size_t m, std::size_t n);

  double at(std::size_t i, std::size_t j) const { return gamma[i * cols + j]; }
  double& at(std::size_t i, std::size_t j) { return gamma[i * cols + j]; }
};

// Energy problems optimize the marginal-penalty functional and need a
// superlinear entropy; the homogeneous form only ever evaluates the cone-cost
// sum and accepts any admissible entropy.
enum class ETForm { Energy, Homogeneous };

class ETProblem {
 public:
  // cost entries may be +inf (blocked routes); both measures need strictly
  // positive masses and sizes matching the cost matrix.
  ETProblem(EntropyDescriptor F, std::vector<std::vector<double>> cost,
            const DiscreteMeasure& mu1, const DiscreteMeasure& mu2,
            ETForm form = ETForm::Energy);

  const EntropyDescriptor& entropy() const { return entropy_; }
  const std::vector<std::vector<double>>& cost() const { return cost_; }
  const std::vector<double>& masses1() const { return r_; }
  const std::vector<double>& masses2() const { return t_; }
  ETForm form() const { return form_; }
  std::size_t rows() const { return r_.size(); }
  std::size_t cols() const { return t_.size(); }

 private:
  EntropyDescriptor entropy_;
  std::vector<std::vector<double>> cost_;
  std::vector<double> r_;
  std::vector<double> t_;
  ETForm form_;
};

// Marginal penalties plus transport charge; +inf propagates, and blocked
// routes with zero plan mass charge nothing.
ExtendedValue energy(const ETProblem& problem, const TransportPlan& plan);

// Plan-weighted sum of two-leg cone costs at the local mass ratios; every row
// and column of the plan must carry positive mass.
ExtendedValue h_functional(const ETProblem& problem, const TransportPlan& plan);

struct SolveOptions {
  double tol = 1e-8;
  int max_iters = 100000;
  std::uint64_t seed = 0x5EED;
};

struct SolveReport {
  bool converged = false;
  bool stalled = false;
  bool infeasible = false;
  int iterations = 0;
  double projected_gradient_norm = 0.0;
  int best_start = -1;
};

struct SolveResult {
  TransportPlan plan;
  ExtendedValue value;
  SolveReport report;
};

// Minimizes the energy over nonnegative plans: projected gradient with Armijo
// backtracking for the smooth power families, coordinate-wise golden-section
// cycling for kinked entropies, multi-started from a diagonal seed, a product
// seed, and a near-zero seed; blocked routes are eliminated up front.
SolveResult solve(const ETProblem& problem, const SolveOptions& opts = {});

struct BruteForceResult {
  double min_energy = 0.0;
  double min_h = 0.0;
  TransportPlan argmin_energy;
  TransportPlan argmin_h;
  double grid_step = 0.0;
};

// Exhaustive sweep over plans with grid_per_entry values per entry on
// [0, 3(total masses)]; limited to m*n <= 4 entries.
BruteForceResult brute_force_et(const ETProblem& problem, int grid_per_entry);

// Coarse sweep plus repeated zooming around the energy argmin; sharp enough
// to score solver output.
double brute_force_refined(const ETProblem& problem, int initial_grid, int levels = 14);

}  // namespace divkit
