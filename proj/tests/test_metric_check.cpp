#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <functional>
#include <vector>

#include "divkit/entropy.hpp"
#include "divkit/marginal_perspective.hpp"
#include "divkit/metric_check.hpp"

using namespace divkit;

namespace {

CostlessEvaluator symmetric_cost(const EntropyDescriptor& F) {
  return MarginalPerspective(F);
}

}  // namespace

TEST_CASE("square root of the Hellinger divergence is a metric") {
  const auto report = check_costless_triangle(symmetric_cost(EntropyDescriptor::power_like(1.0)), 0.5);
  CHECK(report.passed);
  CHECK(report.worst_violation <= kTriangleSlack);
  CHECK(!report.witness.has_value());
  CHECK(report.tested > 10000);
}

TEST_CASE("total variation is a metric as is") {
  const auto report = check_costless_triangle(symmetric_cost(EntropyDescriptor::chi_alpha(1.0)), 1.0);
  CHECK(report.passed);
  CHECK(!report.necessary_condition_failed);
}

TEST_CASE("the power family fails between one half and one") {
  const auto H = symmetric_cost(EntropyDescriptor::power_like(0.75));
  const auto report = check_costless_triangle(H, 0.5);
  CHECK(!report.passed);
  REQUIRE(report.witness.has_value());
  CHECK(report.worst_violation > kTriangleSlack);
  // the witness reproduces: H(u,1)^a > v^a H(u/v,1)^a + H(v,1)^a
  const double u = report.witness->u, v = report.witness->v, a = 0.5;
  const double lhs = std::pow(H(u, 1.0).finite_value(), a);
  const double rhs = std::pow(v, a) * std::pow(H(u / v, 1.0).finite_value(), a) +
                     std::pow(H(v, 1.0).finite_value(), a);
  CHECK(lhs > rhs + kTriangleSlack);
  CHECK(lhs - rhs == doctest::Approx(report.worst_violation).epsilon(1e-9));
}

TEST_CASE("an infinite cost at vanishing mass fails the necessary condition") {
  const auto report = check_costless_triangle(symmetric_cost(EntropyDescriptor::power_log(2.0)), 0.5);
  CHECK(!report.passed);
  CHECK(report.necessary_condition_failed);
}

TEST_CASE("monotone profile certificates") {
  const auto good = kafka_certificate(symmetric_cost(EntropyDescriptor::power_like(2.0)), 0.5);
  CHECK(good.certificate);
  CHECK(good.max_increase <= kMonotoneSlack);
  CHECK(good.profile.size() > 100);

  const auto bad = kafka_certificate(symmetric_cost(EntropyDescriptor::power_like(0.75)), 0.5);
  CHECK(!bad.certificate);
  CHECK(bad.max_increase > kMonotoneSlack);

  // Matusita-induced costs have a constant profile, the degenerate monotone case
  const double a = 0.5;
  const CostlessEvaluator matusita_cost = [a](double r, double t) {
    return ExtendedValue::finite(std::pow(2.0, 1.0 - 1.0 / a) *
                                 std::pow(std::fabs(std::pow(r, a) - std::pow(t, a)), 1.0 / a));
  };
  const auto flat = kafka_certificate(matusita_cost, a);
  CHECK(flat.certificate);
}

TEST_CASE("concave transform checks") {
  std::vector<double> d;
  for (int i = 0; i <= 40; ++i) d.push_back(3.0 * i / 40.0);

  const auto root = concave_transform_check([](double x) { return std::sqrt(x); }, d);
  CHECK(root.passed);
  CHECK(root.zero_at_zero);
  CHECK(root.nonnegative);
  CHECK(root.midpoint_concave);
  CHECK(root.subadditive);

  const auto square = concave_transform_check([](double x) { return x * x; }, d);
  CHECK(!square.passed);
  CHECK(!square.subadditive);

  const auto angle = concave_transform_check(
      [](double x) {
        const double base = std::max(1.0 - 0.5 * x * x, 0.0);
        return std::acos(std::pow(base, 2.0));
      },
      d);
  CHECK(angle.passed);
}

TEST_CASE("largest metric exponent by bisection") {
  const auto tv = max_metric_power(symmetric_cost(EntropyDescriptor::chi_alpha(1.0)), 0.1, 1.0);
  REQUIRE(tv.has_value());
  CHECK(*tv == doctest::Approx(1.0).epsilon(2e-3));

  const auto chi2 = max_metric_power(symmetric_cost(EntropyDescriptor::chi_alpha(2.0)), 0.1, 1.0);
  REQUIRE(chi2.has_value());
  CHECK(*chi2 == doctest::Approx(0.5).epsilon(0.02));

  // the guaranteed exponent 1 - p is not tight here; the sweep finds more
  const auto p075 = max_metric_power(symmetric_cost(EntropyDescriptor::power_like(0.75)), 0.1, 1.0);
  REQUIRE(p075.has_value());
  CHECK(*p075 >= 0.25 - 0.01);
  CHECK(*p075 == doctest::Approx(0.4396).epsilon(0.05));

  const auto hopeless = max_metric_power(symmetric_cost(EntropyDescriptor::power_log(2.0)), 0.1, 1.0);
  CHECK(!hopeless.has_value());
}

TEST_CASE("reports are deterministic for a fixed seed") {
  const auto H = symmetric_cost(EntropyDescriptor::power_like(0.75));
  const auto r1 = check_costless_triangle(H, 0.5, 120, 400, 42);
  const auto r2 = check_costless_triangle(H, 0.5, 120, 400, 42);
  CHECK(r1.worst_violation == r2.worst_violation);
  CHECK(r1.tested == r2.tested);
  REQUIRE(r1.witness.has_value());
  REQUIRE(r2.witness.has_value());
  CHECK(r1.witness->u == r2.witness->u);
  CHECK(r1.witness->v == r2.witness->v);
}
