#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "divkit/entropy.hpp"
#include "divkit/extended_value.hpp"

namespace divkit {

struct IterationReport;

// Convex function on [1, s_max] sampled on a log-spaced grid, extended below
// s = 1 through the mass-swap symmetry F(s) = s F(1/s) and beyond s_max by a
// linear continuation. Carrier for iterates of the divergence map T_a.
class SampledFunction {
 public:
  // Samples an entropy on the grid; reads below 1 go through the symmetric
  // extension, so asymmetric entropies are implicitly symmetrized there.
  static SampledFunction from_entropy(const EntropyDescriptor& F, int nodes = 512,
                                      double s_max = 64.0);

  // Adopts explicit node values. The grid must start at exactly 1, increase
  // strictly, carry value 0 at s = 1, and be convex up to a 1e-8 defect.
  static SampledFunction from_values(std::vector<double> grid,
                                     std::vector<ExtendedValue> values,
                                     bool symmetric_extension = true);

  static SampledFunction from_callable(const std::function<double(double)>& f,
                                       int nodes = 512, double s_max = 64.0);

  const std::vector<double>& grid() const { return grid_; }
  std::vector<ExtendedValue> values() const;
  bool symmetric_extension() const { return symmetric_; }

  // Piecewise-linear read in (ln s, value); segments touching an infinite
  // node are infinite away from their finite endpoint.
  ExtendedValue operator()(double s) const;

  // Worst height of a node above the chord of its neighbours (s coordinates);
  // 0 for a convex sample.
  double convexity_defect() const;

 private:
  SampledFunction() = default;

  const std::vector<double>& values_raw() const { return vals_; }

  std::vector<double> grid_;
  std::vector<double> vals_;
  bool symmetric_ = true;

  friend SampledFunction apply_T(const SampledFunction& F, double a);
  friend std::pair<SampledFunction, IterationReport> iterate_T(const SampledFunction& F,
                                                               double a, int max_iters,
                                                               double tol);
  friend SampledFunction make_sandwich_upper(double a, double b, double c, int nodes,
                                             double s_max);
  friend SampledFunction make_sandwich_lower(double a, double b, double c, int nodes,
                                             double s_max);
};

enum class Direction { Decreasing, Increasing, Mixed, Stationary };

struct IterationReport {
  bool converged = false;
  bool diverged = false;
  int iterations = 0;
  std::vector<double> sup_changes;  // normalized sup-change per sweep
  Direction direction = Direction::Stationary;
  double fitted_constant = 0.0;  // value(2) / (2^a - 1)^(1/a) of the result
};

// One sweep of the divergence map:
//   (T_a F)(s) = 2^(1/a - 1) min_{theta in [1, s]} [ F(theta) + theta F(s/theta) ],
// computed nodewise with a coarse log scan plus golden refinement.
SampledFunction apply_T(const SampledFunction& F, double a);

// Iterates T_a until the normalized sup-change drops below tol, the sweep
// budget runs out, or the iterates start running away (the map expands some
// seeds for a < 1); on divergence the iterate with the smallest change seen
// is returned together with the diverged flag.
std::pair<SampledFunction, IterationReport> iterate_T(const SampledFunction& F, double a,
                                                      int max_iters = 500,
                                                      double tol = 1e-8);

// Profiles c (s^a - 1)^(1/a) capped at b: the upper version jumps to +inf
// past b, the lower version continues linearly with the slope at b.
SampledFunction make_sandwich_upper(double a, double b, double c, int nodes = 512,
                                    double s_max = 64.0);
SampledFunction make_sandwich_lower(double a, double b, double c, int nodes = 512,
                                    double s_max = 64.0);

}  // namespace divkit
