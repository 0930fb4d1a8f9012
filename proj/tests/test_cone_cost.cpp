#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "divkit/cone_cost.hpp"
#include "divkit/entropy.hpp"

using namespace divkit;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
const double kPi = std::acos(-1.0);
}  // namespace

TEST_CASE("metric space validation and factories") {
  CHECK(FiniteMetricSpace::single_point().size() == 1);
  const auto path = FiniteMetricSpace::path(3);
  CHECK(path.distance(0, 2) == doctest::Approx(2.0));
  const auto plane = FiniteMetricSpace::planar({{0, 0}, {3, 4}});
  CHECK(plane.distance(0, 1) == doctest::Approx(5.0));

  using Rows = std::vector<std::vector<double>>;
  CHECK_THROWS_AS(FiniteMetricSpace(Rows{{0.0, 1.0}, {2.0, 0.0}}), std::invalid_argument);
  CHECK_THROWS_AS(FiniteMetricSpace(Rows{{0.5}}), std::invalid_argument);
  CHECK_THROWS_AS(FiniteMetricSpace(Rows{{0.0, 0.0}, {0.0, 0.0}}), std::invalid_argument);
  CHECK_THROWS_AS(FiniteMetricSpace(Rows{{0.0, 1.0, 5.0}, {1.0, 0.0, 1.0}, {5.0, 1.0, 0.0}}),
                  std::invalid_argument);  // 5 > 1 + 1
}

TEST_CASE("cone point identification") {
  CHECK(cone_equivalent({0, 0.0}, {4, 0.0}));
  CHECK(cone_equivalent({2, 1.5}, {2, 1.5}));
  CHECK(!cone_equivalent({2, 1.5}, {3, 1.5}));
  CHECK(!cone_equivalent({2, 1.5}, {2, 1.4}));
}

TEST_CASE("transport-surcharge cost, primal form") {
  for (const auto& F :
       {EntropyDescriptor::power_like(1.0), EntropyDescriptor::chi_alpha(2.0),
        EntropyDescriptor::matusita(0.5)})
    for (double rho : {0.4, 1.0, 3.0}) CHECK(h_cost_primal(F, 0.0, rho, rho).as_double() == 0.0);

  // the square-root family with a surcharge keeps its closed form
  const auto u1 = EntropyDescriptor::power_like(1.0);
  for (double c : {0.0, 0.5, 2.0})
    for (double r : {0.5, 1.0, 4.0})
      for (double t : {0.25, 1.0, 2.0}) {
        const double expect =
            (r + t) - 2.0 * std::sqrt(r * t) * std::exp(-c / 2.0);
        CHECK(h_cost_primal(u1, c, r, t).finite_value() ==
              doctest::Approx(expect).epsilon(1e-8).scale(1.0));
      }
  CHECK(h_cost_primal(u1, 2.0, 1.0, 1.0).finite_value() ==
        doctest::Approx(2.0 * (1.0 - std::exp(-1.0))).epsilon(1e-9));

  // an infinite surcharge charges both masses at the vanishing-mass price
  CHECK(h_cost_primal(EntropyDescriptor::chi_alpha(2.0), kInf, 2.0, 3.0).finite_value() ==
        doctest::Approx(5.0));
}

TEST_CASE("primal cost is monotone and concave in the surcharge") {
  const auto F = EntropyDescriptor::power_like(2.0);
  double prev = -1.0;
  std::vector<double> vals;
  for (double c : {0.0, 0.5, 1.0, 1.5, 2.0}) {
    const double v = h_cost_primal(F, c, 1.0, 2.0).finite_value();
    CHECK(v >= prev - 1e-12);
    prev = v;
    vals.push_back(v);
  }
  for (std::size_t i = 1; i + 1 < vals.size(); ++i)
    CHECK(vals[i] >= 0.5 * (vals[i - 1] + vals[i + 1]) - 1e-10);
}

TEST_CASE("dual form agrees with the primal") {
  const auto u1 = EntropyDescriptor::power_like(1.0);
  CHECK(h_cost_dual(u1, 1.0, 0.0, 0.0).as_double() == 0.0);
  CHECK(h_cost_dual(u1, 0.0, 1.0, 4.0).finite_value() == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(h_cost_dual(EntropyDescriptor::power_like(2.0), 0.0, 3.0, 0.2).finite_value() ==
        doctest::Approx(1.225).epsilon(1e-7));

  for (const auto& F :
       {EntropyDescriptor::power_like(0.0), EntropyDescriptor::power_like(0.5),
        EntropyDescriptor::power_like(1.0), EntropyDescriptor::power_like(2.0)})
    for (double c : {0.0, 1.0})
      for (double r : {0.3, 1.0})
        for (double t : {0.7, 2.5}) {
          const double p = h_cost_primal(F, c, r, t).finite_value();
          const double d = h_cost_dual(F, c, r, t).finite_value();
          CHECK(d == doctest::Approx(p).epsilon(1e-6).scale(1.0));
        }
}

TEST_CASE("power-family cone cost closed forms") {
  CHECK(h_p_cone(1.0, 0.0, 1.0, 4.0).finite_value() == doctest::Approx(1.0));
  CHECK(h_p_cone(0.0, 1.0, 0.0, 1.0).finite_value() == doctest::Approx(std::log(3.0)));
  for (double r : {0.5, 1.0, 2.0})
    for (double t : {0.5, 3.0})
      CHECK(h_p_cone(2.0, 0.0, r, t).finite_value() ==
            doctest::Approx((r - t) * (r - t) / (2.0 * (r + t))).epsilon(1e-12));
  for (double p : {0.0, 1.0, 2.0})
    CHECK(h_p_cone(p, 1.3, 0.0, 0.0).as_double() == 0.0);
}

TEST_CASE("cone cost equals the primal program on the power family") {
  for (double p : {0.5, 1.0, 2.0})
    for (double d : {0.0, 0.7, 1.5})
      for (double r : {0.4, 1.0})
        for (double t : {1.0, 2.2}) {
          const auto closed = h_p_cone(p, d, r, t);
          const auto primal =
              h_cost_primal(EntropyDescriptor::power_like(p), d * d, r, t);
          CHECK(closed.finite_value() ==
                doctest::Approx(primal.finite_value()).epsilon(1e-7).scale(1.0));
        }
}

TEST_CASE("angle-form cost") {
  for (double r : {0.5, 1.0, 2.0})
    for (double t : {1.0, 3.0}) {
      CHECK(h_bar_p(1.0, kPi / 2.0, r, t) == doctest::Approx((r + t) / 2.0));
      CHECK(h_bar_p(1.0, 2.5, r, t) == doctest::Approx((r + t) / 2.0));  // capped past pi/2
    }
  CHECK(h_bar_p(2.0, 0.0, 3.0, 3.0) == doctest::Approx(0.0).scale(1.0));

  // at exponent one the angle form is half the squared cone distance
  for (double dbar : {0.0, 0.4, 1.0, kPi / 2.0})
    for (double r : {0.5, 2.0}) {
      const double lhs = h_bar_p(1.0, dbar, r, 3.0);
      const double dc = cone_metric(dbar, std::sqrt(r), std::sqrt(3.0));
      CHECK(lhs == doctest::Approx(0.5 * dc * dc).epsilon(1e-12));
    }
}

TEST_CASE("angle substitution identity") {
  for (double p : {1.0, 1.5, 2.0})
    for (double d : {0.0, 0.3, 1.0, 2.0, 3.0})
      for (double r : {0.0, 0.5, 1.0, 4.0})
        for (double t : {0.5, 1.0, 4.0}) {
          const double lhs = (p / 2.0) * h_p_cone(p, d, r, t).finite_value();
          const double rhs = h_bar_p(p, f_p_transform(p, d), r, t);
          CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9).scale(1.0));
        }
}

TEST_CASE("cone distance") {
  CHECK(cone_metric(1.7, 0.0, 0.0) == 0.0);
  CHECK(cone_metric(0.0, 1.0, 3.0) == doctest::Approx(2.0));
  CHECK(cone_metric(kPi, 1.0, 1.0) == doctest::Approx(2.0));
  CHECK(cone_metric(5.0, 1.0, 1.0) == doctest::Approx(2.0));  // angles cap at pi
}

TEST_CASE("counterexamples below exponent one") {
  for (double p : {-1.0, 0.0, 0.25, 0.4, 0.75}) {
    const auto cex = counterexample_p_below_one(p);
    CHECK(cex.margin > 1e-9);
    CHECK(cex.lhs == doctest::Approx(cex.rhs + cex.margin).epsilon(1e-12));
  }
  CHECK(counterexample_p_below_one(0.0).margin ==
        doctest::Approx(std::sqrt(std::log(3.0)) - std::sqrt(std::log(2.0))).epsilon(1e-6));
  CHECK_THROWS_AS(counterexample_p_below_one(1.0), std::invalid_argument);
}

TEST_CASE("triangle sweep passes at and above exponent one") {
  const auto X = FiniteMetricSpace::planar({{0, 0}, {1, 0}, {0.3, 0.7}});
  for (double p : {1.0, 2.0}) {
    const auto report = check_cone_triangle(p, X, 2000);
    CHECK(report.passed);
    CHECK(report.worst_violation <= 1e-9);
    CHECK(report.tested > 2000);  // stress battery adds to the random draws
  }
  const auto degenerate = check_cone_triangle(2.0, FiniteMetricSpace::single_point(), 500);
  CHECK(degenerate.passed);
}

TEST_CASE("mean ratio statistic") {
  for (double p : {1.5, 2.0, 3.0}) CHECK(theta_p(p, 2.7, 2.7) == doctest::Approx(1.0));
  CHECK(theta_p(2.0, 1.0, 4.0) == doctest::Approx(0.8));
  double prev = 0.0;
  for (double u : {0.05, 0.2, 0.5, 0.9}) {
    const double v = theta_p(2.0, u, 1.0);
    CHECK(v > prev);
    prev = v;
  }
  CHECK_THROWS_AS(theta_p(2.0, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("endpoint comparison audit") {
  const auto rep = final_inequality_check(1.2, 40, 40);
  CHECK(rep.passed);
  CHECK(rep.predicted_sup == doctest::Approx(4.0 / 0.2));
  CHECK(rep.lhs_sup <= rep.rhs_min);
  CHECK_THROWS_AS(final_inequality_check(1.0), std::invalid_argument);
}
