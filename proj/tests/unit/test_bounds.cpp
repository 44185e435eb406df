#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "locfade/bounds.hpp"
#include "locfade/errors.hpp"
#include "locfade/numerics.hpp"
#include "locfade/random.hpp"

using namespace locfade;

namespace {
const std::vector<Point> kSquare{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
const std::vector<Point> kLine{{0, 0}, {1, 0}, {1, 0}, {0, 0}};
}  // namespace

TEST_CASE("AWGN bound") {
  CHECK(crlb_awgn(kLine, {0.5, 0}, 1.0, 1.0, 1).crlb == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(crlb_awgn(kSquare, {0.5, 0.5}, 1.0, 1.0, 2).crlb == doctest::Approx(1.0).epsilon(1e-14));
  const double a = crlb_awgn(kSquare, {0.3, 0.6}, 1e-9, 3e8, 2).crlb;
  const double b = crlb_awgn(kSquare, {0.3, 0.6}, 2e-9, 3e8, 2).crlb;
  CHECK(std::abs(b / a - 4.0) < 1e-12);
  const std::vector<Point> collinear{{0, 0}, {1, 0}, {2, 0}};
  CHECK_THROWS_AS(crlb_awgn(collinear, {3, 0}, 1.0, 1.0, 2), SingularGeometryError);
}

TEST_CASE("known fading bound") {
  const std::vector<double> ones(4, 1.0), root2(4, std::sqrt(2.0));
  CHECK(crlb_known_fading(kLine, {0.5, 0}, 1, 1, ones).crlb == doctest::Approx(0.25));
  CHECK(crlb_known_fading(kLine, {0.5, 0}, 1, 1, root2).crlb == doctest::Approx(0.125));
  const std::vector<Point> two{{0, 0}, {1, 0}};
  const std::vector<double> h{1.0, 2.0};
  CHECK(std::abs(crlb_known_fading(two, {0.5, 0}, 1, 1, h).crlb - 0.2) < 1e-15);
  const std::vector<double> z{1.0, 0.0};
  CHECK_THROWS_AS(crlb_known_fading(two, {0.5, 0}, 1, 1, z), DegenerateChannelError);
}

TEST_CASE("MCRLB equals AWGN bound") {
  Stream s(5, 0);
  for (int g = 0; g < 20; ++g) {
    std::vector<Point> a;
    for (int i = 0; i < 5; ++i) a.push_back({s.uniform(-3, 3), s.uniform(-3, 3)});
    const Point z{s.uniform(-1, 1), s.uniform(-1, 1)};
    for (int dim : {1, 2}) {
      const auto m = mcrlb(a, z, 1e-9, 3e8, dim);
      CHECK(std::abs(m.crlb - crlb_awgn(a, z, 1e-9, 3e8, dim).crlb) <= 1e-12 * m.crlb);
      CHECK(m.ratio_vs_awgn == 1.0);
    }
  }
}

TEST_CASE("loss ratio k") {
  CHECK(loss_ratio_k(1.0) == 10.0 / 3.0);
  CHECK(std::abs(loss_ratio_k(0.5) - 4.0) < 1e-15);
  double prev = loss_ratio_k(0.5);
  for (double m : {0.75, 1.0, 2.0, 4.0, 16.0, 64.0, 1000.0}) {
    CHECK(loss_ratio_k(m) < prev);
    prev = loss_ratio_k(m);
  }
  // The formula tends to 2, not 1.
  CHECK(std::abs(loss_ratio_k(1e6) - 2.0) < 1e-5);
  // Gamma-function form
  for (double m : {0.5, 1.3, 7.0}) {
    const double g = std::sqrt(std::numbers::pi) * std::exp(ln_gamma(m + 2.5) - ln_gamma(1.5) - ln_gamma(m + 0.5)) /
                     ((m + 0.5) * (m + 0.5));
    CHECK(std::abs(loss_ratio_k(m) / g - 1.0) < 1e-13);
  }
}

TEST_CASE("X integral") {
  const double sigma = 0.7;
  // d = 0: one-sided integral equals the leading term
  CHECK(std::abs(x_integral(0.0, sigma, 1.0, 1.0) / x_integral_leading(sigma, 1.0) - 1.0) < 1e-9);
  const double lead1 = std::sqrt(2.0) * std::pow(sigma, 3) * std::tgamma(1.5) * std::tgamma(2.0) / std::tgamma(3.5);
  CHECK(std::abs(x_integral_leading(sigma, 1.0) / lead1 - 1.0) < 1e-13);
  // quadrature oracle by brute force at m = 1
  const double d = 0.4;
  const auto brute = integrate_semi_infinite([&](double tau) {
    const double u = tau - d;
    return u * u * std::pow(u * u / (2 * sigma * sigma) + 1.0, -3.5);
  }, {}, sigma);
  CHECK(std::abs(x_integral(d, sigma, 1.0, 1.0) / brute.value - 1.0) < 1e-8);
  // the upper bound holds for a ≤ 1
  for (double m : {0.5, 1.0, 2.0, 4.0}) {
    for (double a : {0.0, 0.05, 0.3, 0.7, 1.0}) {
      CHECK(x_integral(a * sigma, sigma, 1.0, m) <= x_integral_bound(a * sigma, sigma, 1.0, m) * (1 + 1e-12));
    }
  }
  CHECK(x_integral(1.5 * sigma, sigma, 1.0, 1.0) > x_integral_bound(1.5 * sigma, sigma, 1.0, 1.0));
  // σ scaling: X(kd; kσ) = k³ X(d; σ)
  CHECK(std::abs(x_integral(0.6, 2 * sigma, 1.0, 2.0) / x_integral(0.3, sigma, 1.0, 2.0) - 8.0) < 1e-8);
}

TEST_CASE("Y integral") {
  const double sigma = 1.3;
  CHECK(std::abs(y_integral(0.0, sigma, 1.0) / (std::pow(sigma, 3) * std::numbers::pi / 16) - 1.0) < 1e-9);
  for (double a : {0.1, 0.5, 1.0}) {
    CHECK(y_integral(a * sigma, sigma, 1.0) <= y_integral_bound(a * sigma, sigma, 1.0) * (1 + 1e-12));
  }
  // the two-term bound stops holding once d/(cσ) passes about 1.1
  CHECK(y_integral(1.5 * sigma, sigma, 1.0) > y_integral_bound(1.5 * sigma, sigma, 1.0));
}

TEST_CASE("Nakagami bound") {
  const double sigma = 1.0, c = 1.0;
  const std::vector<double> s1{sigma};
  const auto cf = crlb_nakagami(kLine, {0.5, 0}, s1, c, 1.0, 1, BoundMethod::ClosedForm);
  CHECK(std::abs(cf.crlb - (10.0 / 3.0) * 0.25) < 1e-15);
  CHECK(cf.ratio_vs_awgn == doctest::Approx(10.0 / 3.0));
  // quadrature against closed form where d/(cσ) ≤ 0.1
  const double small = 1e-10;
  const double sig = 1.0 / (3e8 * std::sqrt(1e-2)) * 100;  // d/(cσ) ≈ 0.023
  const std::vector<double> sv{sig};
  const auto q = crlb_nakagami(kSquare, {0.5, 0.5}, sv, 3e8, 1.0, 2, BoundMethod::Quadrature);
  const auto k = crlb_nakagami(kSquare, {0.5, 0.5}, sv, 3e8, 1.0, 2, BoundMethod::ClosedForm);
  CHECK(std::abs(q.crlb / k.crlb - 1.0) < 0.03);
  (void)small;
  // m = 64: closed form is 2(64+1.5)/(64.5) away from 1
  const auto m64 = crlb_nakagami(kLine, {0.5, 0}, s1, c, 64.0, 1, BoundMethod::ClosedForm);
  CHECK(std::abs(m64.ratio_vs_awgn - loss_ratio_k(64.0)) < 1e-12);
  // decreasing in m; MCRLB below
  double prev = 1e300;
  for (double m : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0}) {
    const auto b = crlb_nakagami(kSquare, {0.4, 0.55}, sv, 3e8, m, 2, BoundMethod::Quadrature);
    CHECK(b.crlb < prev);
    CHECK(b.crlb >= mcrlb(kSquare, {0.4, 0.55}, sig, 3e8, 2).crlb);
    prev = b.crlb;
  }
  // per-anchor σ: 1/Σ FI_i in 1-D
  const std::vector<double> sv2{1.0, 2.0, 1.0, 2.0};
  const auto het = crlb_nakagami(kLine, {0.5, 0}, sv2, 1.0, 1.0, 1, BoundMethod::ClosedForm);
  const double fi = 2.0 / (10.0 / 3.0) + 2.0 / (10.0 / 3.0 * 4.0);
  CHECK(std::abs(het.crlb - 1.0 / fi) < 1e-14);
}

TEST_CASE("no-CSI bound") {
  const auto cf = crlb_nocsi(kLine, {0.5, 0}, 1.0, 1.0, 1.0, 1, BoundMethod::ClosedForm);
  CHECK(cf.crlb == 1.0);
  CHECK(cf.ratio_vs_awgn == 4.0);
  const std::vector<double> s1{1.0};
  const auto nak = crlb_nakagami(kLine, {0.5, 0}, s1, 1.0, 1.0, 1, BoundMethod::ClosedForm);
  CHECK(std::abs(cf.crlb / nak.crlb - 1.2) < 1e-14);
  const double sig = 1.0 / 3e8 * 10;
  const auto q = crlb_nocsi(kSquare, {0.5, 0.5}, sig, 3e8, 1.0, 2, BoundMethod::Quadrature);
  const auto k = crlb_nocsi(kSquare, {0.5, 0.5}, sig, 3e8, 1.0, 2, BoundMethod::ClosedForm);
  CHECK(std::abs(q.crlb / k.crlb - 1.0) < 0.03);
  CHECK_THROWS_AS(crlb_nocsi(kLine, {0.5, 0}, 1.0, 1.0, 2.0, 1, BoundMethod::ClosedForm), UnsupportedRegimeError);
}

TEST_CASE("rotation invariance") {
  const double th = 0.7;
  auto rot = [&](Point p) { return Point{std::cos(th) * p.x - std::sin(th) * p.y, std::sin(th) * p.x + std::cos(th) * p.y}; };
  std::vector<Point> r;
  for (const auto& p : kSquare) r.push_back(rot(p));
  const Point z{0.3, 0.8};
  const std::vector<double> sv{0.05};
  const double a = crlb_nakagami(kSquare, z, sv, 1.0, 2.0, 2, BoundMethod::Quadrature).crlb;
  const double b = crlb_nakagami(r, rot(z), sv, 1.0, 2.0, 2, BoundMethod::Quadrature).crlb;
  CHECK(std::abs(a / b - 1.0) < 1e-9);
}

TEST_CASE("cooperative bound") {
  for (auto [M, N] : {std::pair{4, 1}, std::pair{4, 4}, std::pair{8, 2}}) {
    const auto b = crlb_cooperative(M, N, 1.0, 1.0, 1.0, BoundRegime::Nakagami);
    const double non = loss_ratio_k(1.0) / M;
    CHECK(b.crlb / non == doctest::Approx(static_cast<double>(M + 1) / (N + M)).epsilon(1e-14));
  }
  const auto one = crlb_cooperative(4, 1, 1.0, 1.0, 1.0, BoundRegime::Nakagami);
  CHECK(std::abs(one.crlb - (10.0 / 3.0) / 4) < 1e-15);
  const auto nc = crlb_cooperative(4, 1, 1.0, 1.0, 1.0, BoundRegime::NoCsi);
  CHECK(nc.crlb == 1.0);
  CHECK(crlb_cooperative(4, 4, 1.0, 1.0, 1.0, BoundRegime::NoCsi).crlb == doctest::Approx(5.0 / 8.0));
}
