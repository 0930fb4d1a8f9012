#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>

#include "divkit/power_mean.hpp"

using divkit::power_mean;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("arithmetic, geometric, and harmonic spot values") {
  CHECK(power_mean(1.0, 1.0, 3.0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(power_mean(0.0, 4.0, 9.0) == doctest::Approx(6.0).epsilon(1e-14));
  CHECK(power_mean(-1.0, 1.0, 4.0) == doctest::Approx(1.6).epsilon(1e-14));
  CHECK(power_mean(0.5, 1.0, 4.0) == doctest::Approx(2.25).epsilon(1e-14));
}

TEST_CASE("boundary conventions at zero mass") {
  CHECK(power_mean(-1.0, 0.0, 5.0) == 0.0);
  CHECK(power_mean(-3.0, 2.0, 2.0) == 2.0);
  CHECK(power_mean(0.0, 0.0, 7.0) == 0.0);
  CHECK(power_mean(2.0, 0.0, 3.0) == doctest::Approx(3.0 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(power_mean(1.0, 0.0, 3.0) == doctest::Approx(1.5).epsilon(1e-14));
}

TEST_CASE("equal arguments are a fixed point for every exponent") {
  for (double p : {-50.0, -2.0, -0.5, 0.0, 1e-9, 0.5, 1.0, 3.0, 50.0})
    CHECK(power_mean(p, 2.5, 2.5) == doctest::Approx(2.5).epsilon(1e-14));
}

TEST_CASE("monotone in the exponent and pinched between min and max") {
  const double r = 0.3, t = 7.0;
  double prev = 0.0;
  for (double p : {-8.0, -2.0, -1.0, 0.0, 0.5, 1.0, 2.0, 8.0}) {
    const double m = power_mean(p, r, t);
    CHECK(m >= prev - 1e-12);
    CHECK(m >= r);
    CHECK(m <= t);
    prev = m;
  }
}

TEST_CASE("one-homogeneous in the masses") {
  for (double p : {-2.0, 0.0, 0.5, 3.0})
    for (double lam : {0.01, 1.0, 250.0})
      CHECK(power_mean(p, lam * 1.2, lam * 5.0) ==
            doctest::Approx(lam * power_mean(p, 1.2, 5.0)).epsilon(1e-13));
}

TEST_CASE("continuous through the geometric-mean exponent") {
  const double g = power_mean(0.0, 0.7, 9.1);
  CHECK(power_mean(1e-9, 0.7, 9.1) == doctest::Approx(g).epsilon(1e-7));
  CHECK(power_mean(-1e-9, 0.7, 9.1) == doctest::Approx(g).epsilon(1e-7));
}

TEST_CASE("infinite exponents select max and min") {
  CHECK(power_mean(kInf, 2.0, 5.0) == 5.0);
  CHECK(power_mean(-kInf, 2.0, 5.0) == 2.0);
}

TEST_CASE("no overflow for extreme exponents and scales") {
  CHECK(power_mean(60.0, 1.0, 2.0) == doctest::Approx(2.0).epsilon(0.02));
  CHECK(power_mean(-60.0, 1.0, 2.0) == doctest::Approx(1.0).epsilon(0.02));
  const double big = power_mean(2.0, 1e150, 3e150);
  CHECK(std::isfinite(big));
  CHECK(big >= 1e150);
  const double tiny = power_mean(-2.0, 1e-160, 3e-160);
  CHECK(tiny > 0.0);
  CHECK(tiny <= 3e-160);
}
