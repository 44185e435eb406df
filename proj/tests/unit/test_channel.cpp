#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "locfade/channel.hpp"
#include "locfade/errors.hpp"
#include "locfade/numerics.hpp"
#include "locfade/parallel.hpp"
#include "locfade/random.hpp"

using namespace locfade;

TEST_CASE("streams are reproducible and distinct") {
  Stream a(7, 3), b(7, 3), c(7, 4), d(8, 3);
  const double x = a.uniform();
  CHECK(x == b.uniform());
  CHECK(x != c.uniform());
  CHECK(x != d.uniform());
}

TEST_CASE("parallel_for fills by index") {
  std::vector<double> out(1000);
  parallel_for(out.size(), [&](std::size_t i) { out[i] = static_cast<double>(i) * 2.0; });
  for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == 2.0 * i);
  CHECK(worker_count() >= 1);
}

TEST_CASE("gamma power density") {
  CHECK(gamma_power_pdf(0.0, {1.0}) == 1.0);
  CHECK(std::abs(gamma_power_pdf(1.0, {1.0}) - std::exp(-1.0)) < 1e-15);
  for (double m : {0.5, 1.0, 2.0, 4.0}) {
    const FadingParams p{m};
    const auto mass = integrate_semi_infinite([&](double x) { return x > 0 ? gamma_power_pdf(x, p) : 0.0; });
    const auto mean = integrate_semi_infinite([&](double x) { return x * gamma_power_pdf(x, p); });
    CHECK(std::abs(mass.value - 1.0) < 1e-6);
    CHECK(std::abs(mean.value - 1.0) < 1e-9);
  }
  CHECK_THROWS_AS(gamma_power_pdf(-0.1, {1.0}), DomainError);
  CHECK_THROWS_AS(FadingParams{0.4}.validate(), DomainError);
}

TEST_CASE("envelope density is Rayleigh at m = 1") {
  for (double y : {0.1, 0.5, 1.0, 2.0}) {
    CHECK(std::abs(nakagami_envelope_pdf(y, {1.0}) - 2 * y * std::exp(-y * y)) < 1e-14);
  }
}

TEST_CASE("sample_fading moments") {
  Stream s(1, 0);
  const auto d = sample_fading({1.0}, 1000000, s);
  double sum = 0;
  for (double e : d.envelopes) sum += e * e;
  CHECK(std::abs(sum / d.size() - 1.0) < 0.005);
  for (double th : d.phases) {
    REQUIRE(th >= 0.0);
    REQUIRE(th < 2 * std::numbers::pi);
  }

  Stream s4(1, 1);
  const auto d4 = sample_fading({4.0}, 200000, s4);
  double m1 = 0, m2 = 0;
  for (double e : d4.envelopes) m1 += e * e;
  m1 /= d4.size();
  for (double e : d4.envelopes) m2 += (e * e - m1) * (e * e - m1);
  CHECK(std::abs(m2 / (d4.size() - 1) - 0.25) < 0.01);

  // m = 0.5: |h|² is χ²₁ scaled, mean 1, variance 2
  Stream sh(1, 2);
  const auto dh = sample_fading({0.5}, 200000, sh);
  double mh = 0;
  for (double e : dh.envelopes) mh += e * e;
  CHECK(std::abs(mh / dh.size() - 1.0) < 0.02);
}

TEST_CASE("m = 1 envelope fits Rayleigh (KS)") {
  Stream s(2, 0);
  auto d = sample_fading({1.0}, 20000, s);
  std::vector<double> e = d.envelopes;
  std::sort(e.begin(), e.end());
  double ks = 0.0;
  const double n = static_cast<double>(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) {
    const double cdf = 1.0 - std::exp(-e[i] * e[i]);
    ks = std::max({ks, std::abs(cdf - i / n), std::abs(cdf - (i + 1) / n)});
  }
  CHECK(ks < 1.36 / std::sqrt(n));  // 5% critical value
}

TEST_CASE("phase uncorrelated with power") {
  Stream s(3, 0);
  const auto d = sample_fading({2.0}, 100000, s);
  double mx = 0, my = 0;
  const double n = static_cast<double>(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    mx += d.phases[i];
    my += d.envelopes[i] * d.envelopes[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double a = d.phases[i] - mx, b = d.envelopes[i] * d.envelopes[i] - my;
    sxy += a * b;
    sxx += a * a;
    syy += b * b;
  }
  CHECK(std::abs(sxy / std::sqrt(sxx * syy)) < 4.0 / std::sqrt(n));
}
