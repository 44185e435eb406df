#include <doctest.h>

#include <cmath>
#include <vector>

#include "locfade/detect.hpp"
#include "locfade/errors.hpp"
#include "locfade/numerics.hpp"

using namespace locfade;

namespace {
bool within_se(double mc, double exact, std::size_t n, double k = 3.0) {
  const double se = std::sqrt(std::max(exact * (1 - exact), 1e-12) / n);
  return std::abs(mc - exact) <= k * se;
}
}  // namespace

TEST_CASE("template") {
  const auto t = SignalTemplate::pseudo_random(64);
  t.validate();
  double e = 0;
  for (double x : t.samples) e += x * x;
  CHECK(std::abs(e - 1.0) < 1e-12);
  auto shifted = t;
  shifted.delay = 5;
  CHECK(shifted.aligned()[5] == t.samples[0]);
  SignalTemplate small;
  small.samples = {1.0};
  CHECK_THROWS(small.validate());
}

TEST_CASE("coherent statistic laws") {
  const auto t = SignalTemplate::pseudo_random(64);
  const double sigma = 0.8;
  std::vector<double> r = t.aligned();
  for (auto& x : r) x *= sigma;
  CHECK(std::abs(statistic_coherent(r, t, sigma) - 1.0) < 1e-14);

  Stream s(21, 0);
  const int n = 100000;
  double m1 = 0, m2 = 0, m3 = 0;
  std::vector<double> v(n), w(64);
  for (int i = 0; i < n; ++i) {
    for (auto& x : w) x = sigma * s.normal();
    v[i] = statistic_coherent(w, t, sigma);
    m1 += v[i];
  }
  m1 /= n;
  for (double x : v) {
    m2 += (x - m1) * (x - m1);
    m3 += std::pow(x - m1, 3);
  }
  m2 /= n - 1;
  m3 /= n;
  CHECK(std::abs(m1) < 0.01);
  CHECK(std::abs(m2 - 1) < 0.02);
  CHECK(std::abs(m3) < 3 * std::sqrt(6.0 / n));

  // H1 at |h| = 2, σ = 1
  double h1 = 0;
  const auto al = t.aligned();
  for (int i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < 64; ++k) w[k] = 2.0 * al[k] + s.normal();
    h1 += statistic_coherent(w, t, 1.0);
  }
  CHECK(std::abs(h1 / n - 2.0) < 0.01);
}

TEST_CASE("coherent threshold") {
  CHECK(threshold_coherent(1.0, 0.7, 0.7) == doctest::Approx(0.5));
  for (double g : {0.1, 1.0, 10.0}) {
    for (double h : {0.1, 1.0, 5.0}) {
      const double th = threshold_coherent(g, h, 1.0);
      CHECK(q_function(th - h) >= q_function(th));
    }
  }
  CHECK(threshold_coherent(2.0, 1e4, 1.0) == doctest::Approx(0.5e4).epsilon(1e-3));
  CHECK_THROWS_AS(threshold_coherent(1.0, 0.0, 1.0), DegenerateChannelError);
}

TEST_CASE("averaged coherent pfa/pd") {
  const auto lo = averaged_pfa_pd_coherent_log(-50.0, 1.0, 1.0);
  CHECK(lo.pfa > 0.999);
  CHECK(lo.pd > 0.999);
  const auto hi = averaged_pfa_pd_coherent_log(50.0, 1.0, 1.0);
  CHECK(hi.pfa < 1e-6);
  CHECK(hi.pd < 0.05);
  double prev_pfa = 2, prev_pd = 2;
  for (int i = 0; i < 20; ++i) {
    const auto p = averaged_pfa_pd_coherent_log(-5.0 + 0.5 * i, 0.5, 2.0);
    CHECK(p.pd >= p.pfa);
    CHECK(p.pfa <= prev_pfa);
    CHECK(p.pd <= prev_pd);
    prev_pfa = p.pfa;
    prev_pd = p.pd;
  }
  // Monte Carlo twin at γ = e
  const auto t = SignalTemplate::pseudo_random(16);
  const auto exact = averaged_pfa_pd_coherent(std::exp(1.0), 1.0, 1.0);
  const double th[] = {1.0};
  const auto mc = monte_carlo_points(DetectionRegime::CoherentKnownH, th, t, 1.0, 1.0, 200000, 4);
  CHECK(within_se(mc[0].point.pfa, exact.pfa, 200000));
  CHECK(within_se(mc[0].point.pd, exact.pd, 200000));
}

TEST_CASE("calibration") {
  CHECK(calibrate_gamma(0.1, DetectionRegime::RayleighMarginal, 1.0, 1.0) == q_inverse(0.1));
  const double lg = calibrate_log_gamma_coherent(0.5, 1.0, 1.0);
  CHECK(std::abs(averaged_pfa_pd_coherent_log(lg, 1.0, 1.0).pfa - 0.5) < 1e-6);
  CHECK(std::abs(calibrate_gamma(0.5, DetectionRegime::CoherentKnownH, 1.0, 1.0) - std::exp(lg)) < 1e-9);
  CHECK(std::abs(calibrate_gamma(0.1, DetectionRegime::NoCsiQuadratic, 0.5, 1.0) + 12 * 0.25 * std::log(0.1)) < 1e-12);
}

TEST_CASE("Rayleigh marginal detector") {
  for (double big : {0.1, 1.0, 10.0}) {
    double prev = -1e300;
    for (int i = 0; i <= 400; ++i) {
      const double v = rayleigh_marginal_likelihood(-10.0 + 0.05 * i, big);
      CHECK(v > prev);
      prev = v;
    }
  }
  const auto t = SignalTemplate::pseudo_random(64);
  auto r = t.aligned();
  CHECK(detector_rayleigh_marginal(r, t, 1.0, 0.0));
  for (auto& x : r) x = -x;
  CHECK_FALSE(detector_rayleigh_marginal(r, t, 1.0, 0.0));

  const double gpp = q_inverse(0.1);
  const double pd = rayleigh_marginal_pd(0.1, 1.0, 1.0);
  const double th[] = {gpp};
  const auto mc = monte_carlo_points(DetectionRegime::RayleighMarginal, th, SignalTemplate::pseudo_random(16), 1.0,
                                     1.0, 200000, 5);
  CHECK(within_se(mc[0].point.pd, pd, 200000));
  CHECK(within_se(mc[0].point.pfa, 0.1, 200000));
}

TEST_CASE("no-CSI quadratic detector") {
  const auto t = SignalTemplate::pseudo_random(64);
  Stream s(22, 0);
  std::vector<double> w(64);
  for (auto& x : w) x = s.normal();
  const auto d = detector_nocsi_quadratic(w, t, 1.0, 0.0);
  CHECK(d.statistic >= 0);
  CHECK(d.decision);
  CHECK(nocsi_pd_printed(0.2, 1.0, 0) == doctest::Approx(0.2));
  CHECK(std::abs(nocsi_pfa_printed(12.0, 1.0) - std::exp(-1.0)) < 1e-15);

  // exact law against simulation at SNR 10 dB
  const double sigma = std::pow(10.0, -0.5);
  const QuadraticLaw law(t, sigma);
  for (double p : {0.01, 0.1, 0.5}) {
    const double g = law.gamma_for_pfa(p);
    CHECK(std::abs(law.pfa(g) - p) < 1e-9);
    // carrier 0.25 makes SᵀS = I/2: pfa = exp(−Nγ/σ²)
    CHECK(std::abs(law.pfa(g) - std::exp(-64.0 * g / (sigma * sigma))) < 1e-9);
  }
  const double th[] = {law.gamma_for_pfa(0.05), law.gamma_for_pfa(0.2)};
  const auto mc = monte_carlo_points(DetectionRegime::NoCsiQuadratic, th, t, sigma, 1.0, 100000, 6);
  for (int i = 0; i < 2; ++i) {
    CHECK(within_se(mc[i].point.pfa, law.pfa(th[i]), 100000));
    CHECK(within_se(mc[i].point.pd, law.pd(th[i]), 100000));
  }
  // orthogonal change of basis inside span(S) leaves the statistic alone
  const auto s1 = t.in_phase(), s2 = t.quadrature();
  std::vector<double> r(64), rr(64);
  for (int k = 0; k < 64; ++k) r[k] = s.normal();
  double a = 0, b = 0;
  for (int k = 0; k < 64; ++k) {
    a += r[k] * s1[k];
    b += r[k] * s2[k];
  }
  const double phi = 0.9;
  const double a2 = std::cos(phi) * a - std::sin(phi) * b, b2 = std::sin(phi) * a + std::cos(phi) * b;
  // move r's component in span(S) by the rotation (columns are orthogonal, norm² ½)
  for (int k = 0; k < 64; ++k) rr[k] = r[k] + 2 * ((a2 - a) * s1[k] + (b2 - b) * s2[k]);
  CHECK(std::abs(statistic_nocsi_quadratic(rr, t) - statistic_nocsi_quadratic(r, t)) < 1e-12);
}

TEST_CASE("threshold optimality") {
  const double pfa[] = {0.1, 0.999};
  const auto rows = verify_threshold_optimality(std::pow(10.0, -0.75), 1.0, pfa, 40000, 8);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].pd_channel > rows[0].pd_constant);
  CHECK(rows[0].dominates);
  CHECK(rows[1].pd_channel > 0.999);
  CHECK(std::abs(rows[1].pd_channel - rows[1].pd_constant) < 1e-3);
  // deterministic envelope: thresholds coincide
  const double p2[] = {0.1};
  const auto flat = verify_threshold_optimality(0.5, 5000.0, p2, 20000, 9);
  CHECK(std::abs(flat[0].gap_mc) <= flat[0].gap_ci95 + 1e-12);
}
