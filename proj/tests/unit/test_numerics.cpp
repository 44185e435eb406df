#include <doctest.h>

#include <cmath>
#include <numbers>

#include "locfade/errors.hpp"
#include "locfade/numerics.hpp"

using namespace locfade;

TEST_CASE("q_function values and symmetry") {
  CHECK(q_function(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(q_function(40.0) < 1e-300);
  CHECK(std::abs(q_function(1.6448536269514722) - 0.05) < 1e-9);
  for (double x : {0.1, 0.7, 1.3, 2.9, 5.5}) {
    CHECK(std::abs(q_function(-x) - (1.0 - q_function(x))) < 1e-15);
    CHECK(q_function(x) < q_function(x - 0.01));
  }
}

TEST_CASE("q_inverse round trip") {
  CHECK(q_inverse(0.5) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(std::abs(q_inverse(q_function(2.0)) - 2.0) < 1e-9);
  CHECK(std::abs(q_inverse(0.05) - 1.6448536269514722) < 1e-9);
  for (double p : {1e-15, 1e-9, 1e-4, 0.01, 0.3, 0.5, 0.77, 0.999, 1 - 1e-9}) {
    CHECK(std::abs(q_function(q_inverse(p)) - p) <= 1e-10 * std::max(p, 1e-3));
  }
  CHECK_THROWS_AS(q_inverse(0.0), DomainError);
  CHECK_THROWS_AS(q_inverse(1.0), DomainError);
  CHECK_THROWS_AS(q_inverse(-0.2), DomainError);
}

TEST_CASE("ln_gamma") {
  CHECK(std::abs(ln_gamma(1.0)) < 1e-15);
  CHECK(std::abs(ln_gamma(5.0) - std::log(24.0)) < 1e-14);
  CHECK(std::abs(ln_gamma(1.5) - std::log(std::sqrt(std::numbers::pi) / 2)) < 1e-14);
  for (double x : {0.3, 1.7, 4.2, 12.5, 80.0}) {
    const double lhs = std::exp(ln_gamma(x + 1.0) - ln_gamma(x));
    CHECK(std::abs(lhs / x - 1.0) < 1e-12);
  }
  CHECK_THROWS_AS(ln_gamma(0.0), DomainError);
  CHECK_THROWS_AS(ln_gamma(-1.5), DomainError);
}

TEST_CASE("hyp2f1 series") {
  CHECK(hyp2f1(1, 0, 1.5, 0.3) == 1.0);
  CHECK(hyp2f1(0.7, 2.3, 1.1, 0.0) == 1.0);
  CHECK(std::abs(hyp2f1(1, -1, 1.5, 0.4) - (1.0 - 0.4 / 1.5)) < 1e-15);
  // terminating: explicit Pochhammer sum
  {
    const double a = 1, b = -3, c = 1.5, z = 0.6;
    double term = 1, sum = 1;
    for (int n = 0; n < 3; ++n) {
      term *= (a + n) * (b + n) / ((c + n) * (n + 1)) * z;
      sum += term;
    }
    CHECK(std::abs(hyp2f1(a, b, c, z) - sum) < 1e-15);
  }
  // 2F1(1,1;2;z) = -ln(1-z)/z
  CHECK(std::abs(hyp2f1(1, 1, 2, 0.5) - (-std::log(0.5) / 0.5)) < 1e-13);
  CHECK_THROWS_AS(hyp2f1(1, 1, 2, 1.0), ConvergenceError);
}

TEST_CASE("integrate_semi_infinite") {
  const auto r1 = integrate_semi_infinite([](double x) { return std::exp(-x); });
  CHECK(std::abs(r1.value - 1.0) < 1e-9);
  const auto r2 = integrate_semi_infinite([](double x) { return 4.0 * x * std::exp(-2.0 * x); });
  CHECK(std::abs(r2.value - 1.0) < 1e-9);
  const auto r3 = integrate_semi_infinite([](double x) { return x * std::exp(-x); });
  CHECK(std::abs(r3.value - 1.0) < 1e-9);
  // polynomial tail
  const auto r4 = integrate_semi_infinite([](double x) { return 1.0 / (1.0 + x * x); });
  CHECK(std::abs(r4.value - std::numbers::pi / 2) < 1e-9);
}

TEST_CASE("integrate finite and spec validation") {
  const auto r = integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi);
  CHECK(std::abs(r.value - 2.0) < 1e-12);
  QuadratureSpec bad;
  bad.abs_tol = 0.0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  QuadratureSpec tiny;
  tiny.max_subdivisions = 1;
  tiny.abs_tol = 1e-300;
  tiny.rel_tol = 1e-300;
  CHECK_THROWS_AS(integrate([](double x) { return std::sqrt(x); }, 0.0, 1.0, tiny), ConvergenceError);
}
