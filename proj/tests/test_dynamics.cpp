#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <vector>

#include "divkit/dynamics.hpp"
#include "divkit/entropy.hpp"

using namespace divkit;

namespace {

double matusita_profile(double a, double s) {
  return std::pow(std::fabs(std::pow(s, a) - 1.0), 1.0 / a);
}

// Largest |F(s) - G(s)| / (1 + |G(s)|) over the grid nodes in [lo, hi].
double normalized_gap(const SampledFunction& F, const std::function<double(double)>& g,
                      double lo, double hi) {
  double worst = 0.0;
  const auto vals = F.values();
  for (std::size_t i = 0; i < F.grid().size(); ++i) {
    const double s = F.grid()[i];
    if (s < lo || s > hi || vals[i].is_infinite()) continue;
    const double target = g(s);
    worst = std::max(worst, std::fabs(vals[i].finite_value() - target) / (1.0 + target));
  }
  return worst;
}

}  // namespace

TEST_CASE("sampling an entropy keeps its values and symmetric extension") {
  const auto F = SampledFunction::from_entropy(EntropyDescriptor::power_like(1.0));
  CHECK(F.grid().front() == 1.0);
  CHECK(F.grid().back() == doctest::Approx(64.0));
  CHECK(F(1.0).as_double() == 0.0);
  // off-node reads carry the piecewise-linear interpolation error of the
  // 512-node grid, a few parts in 1e5
  CHECK(F(2.0).as_double() == doctest::Approx(2.0 * std::log(2.0) - 1.0).epsilon(1e-4));
  // reads below one go through s * F(1/s)
  CHECK(F(0.5).as_double() == doctest::Approx(0.5 * (2.0 * std::log(2.0) - 1.0)).epsilon(1e-4));
  CHECK(F.symmetric_extension());
  CHECK(F.convexity_defect() <= 1e-8);
}

TEST_CASE("explicit values are validated") {
  CHECK_THROWS_AS(SampledFunction::from_values({2.0, 4.0}, {ExtendedValue(), ExtendedValue()}),
                  std::invalid_argument);  // grid must start at 1
  CHECK_THROWS_AS(SampledFunction::from_values(
                      {1.0, 2.0}, {ExtendedValue::finite(0.5), ExtendedValue::finite(1.0)}),
                  std::invalid_argument);  // must vanish at 1
  CHECK_THROWS_AS(SampledFunction::from_values(
                      {1.0, 2.0, 4.0},
                      {ExtendedValue::finite(0.0), ExtendedValue::finite(3.0),
                       ExtendedValue::finite(3.5)}),
                  std::invalid_argument);  // concave kink
  const auto ok = SampledFunction::from_values(
      {1.0, 2.0, 4.0},
      {ExtendedValue::finite(0.0), ExtendedValue::finite(1.0), ExtendedValue::finite(3.0)});
  CHECK(ok(3.0).as_double() > 0.9);
}

TEST_CASE("scaled total variation profiles are exact fixed points") {
  const auto F = SampledFunction::from_entropy(EntropyDescriptor::chi_alpha(1.0));
  const auto TF = apply_T(F, 1.0);
  const auto before = F.values();
  const auto after = TF.values();
  for (std::size_t i = 0; i < before.size(); ++i)
    CHECK(std::fabs(after[i].finite_value() - before[i].finite_value()) < 1e-10);
}

TEST_CASE("one sweep pins the value at one and never increases the Hellinger profile") {
  const auto F = SampledFunction::from_entropy(EntropyDescriptor::power_like(1.0));
  const auto TF = apply_T(F, 1.0);
  CHECK(TF(1.0).as_double() == 0.0);
  const auto before = F.values();
  const auto after = TF.values();
  for (std::size_t i = 0; i < before.size(); ++i)
    CHECK(after[i].finite_value() <= before[i].finite_value() + 1e-12);
}

TEST_CASE("the Matusita profile is invariant under its own exponent") {
  const auto M = SampledFunction::from_callable([](double s) { return matusita_profile(0.5, s); });
  const auto TM = apply_T(M, 0.5);
  CHECK(normalized_gap(TM, [](double s) { return matusita_profile(0.5, s); }, 1.0, 64.0) < 2e-3);
}

TEST_CASE("iterating the total variation profile stops immediately") {
  const auto F = SampledFunction::from_entropy(EntropyDescriptor::chi_alpha(1.0));
  const auto [limit, report] = iterate_T(F, 1.0);
  CHECK(report.converged);
  CHECK(report.iterations == 1);
  CHECK(report.direction == Direction::Stationary);
  CHECK(normalized_gap(limit, [](double s) { return std::fabs(s - 1.0); }, 1.0, 64.0) < 1e-9);
}

TEST_CASE("Hellinger iterates sink monotonically to a kink profile") {
  const auto F = SampledFunction::from_entropy(EntropyDescriptor::power_like(1.0));
  const auto [limit, report] = iterate_T(F, 1.0);
  CHECK(report.converged);
  CHECK(!report.diverged);
  CHECK(report.direction == Direction::Decreasing);
  const double c = report.fitted_constant;
  CHECK(c > 0.0);
  CHECK(normalized_gap(limit, [c](double s) { return c * std::fabs(s - 1.0); }, 1.0, 8.0) <
        1e-3);
}

TEST_CASE("per-sweep changes are recorded and shrink") {
  const auto F = SampledFunction::from_entropy(EntropyDescriptor::power_like(1.0));
  const auto [limit, report] = iterate_T(F, 1.0);
  (void)limit;
  REQUIRE(report.sup_changes.size() == static_cast<std::size_t>(report.iterations));
  CHECK(report.sup_changes.back() < 1e-8);
  CHECK(report.sup_changes.front() > report.sup_changes.back());
}

TEST_CASE("exponent domain") {
  const auto F = SampledFunction::from_entropy(EntropyDescriptor::chi_alpha(1.0));
  CHECK_THROWS_AS(apply_T(F, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(apply_T(F, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(apply_T(F, -1.0), std::invalid_argument);
}

TEST_CASE("sandwich profiles") {
  const auto upper = make_sandwich_upper(1.0, 2.0, 1.0);
  CHECK(upper(3.0).is_infinite());
  CHECK(upper(1.5).as_double() == doctest::Approx(0.5).epsilon(1e-4));

  const auto lower = make_sandwich_lower(1.0, 2.0, 1.0);
  CHECK(lower(1.5).as_double() == doctest::Approx(0.5).epsilon(1e-4));
  CHECK(lower(4.0).as_double() == doctest::Approx(3.0).epsilon(1e-4));
}

TEST_CASE("each sweep widens the finite window of the capped profile") {
  // s stays finite when it splits as theta * (s / theta) with both factors
  // under the cap, so the cap squares sweep by sweep
  auto cur = make_sandwich_upper(1.0, 2.0, 1.0);
  double b = 2.0;
  for (int sweep = 0; sweep < 3; ++sweep) {
    const auto next = apply_T(cur, 1.0);
    const double expected_b = b * b;
    long finite = 0;
    const auto vals = next.values();
    for (std::size_t i = 0; i < vals.size(); ++i)
      if (!vals[i].is_infinite()) {
        ++finite;
        CHECK(vals[i].finite_value() ==
              doctest::Approx(next.grid()[i] - 1.0).epsilon(1e-9).scale(1.0));
      }
    long predicted = 0;
    for (double s : next.grid())
      if (s <= expected_b + 1e-9) ++predicted;
    CHECK(std::labs(finite - predicted) <= 2);
    cur = next;
    b = expected_b;
  }
}

TEST_CASE("iterates of a plain kink blow up below exponent one") {
  const auto F = SampledFunction::from_entropy(EntropyDescriptor::chi_alpha(1.0));
  const auto [limit, report] = iterate_T(F, 0.5, 60);
  (void)limit;
  CHECK((report.diverged || !report.converged));
}
