#include "locfade/detect.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/tools/roots.hpp>

#include "locfade/errors.hpp"
#include "locfade/kernels.hpp"
#include "locfade/parallel.hpp"

namespace locfade {

namespace {

constexpr double kPi = std::numbers::pi;

void check_sigma(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("sigma must be positive");
}

void check_m(double m) {
  if (!(m >= 0.5) || !std::isfinite(m)) throw DomainError("m must be finite and >= 0.5");
}

void check_pfa(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("target pfa must lie in (0, 1)");
}

// E[g(|h|)] over the Nakagami-m envelope. The envelope concentrates at 1
// with spread ~1/(2√m), so the range is split there.
double envelope_average(const std::function<double(double)>& g, double m,
                        const QuadratureSpec& quad) {
  const double log_c = std::log(2.0) + m * std::log(m) - ln_gamma(m);
  auto f = [&](double y) {
    if (y <= 0.0) return m == 0.5 ? g(0.0) * std::exp(log_c) : 0.0;
    return g(y) * std::exp(log_c + (2.0 * m - 1.0) * std::log(y) - m * y * y);
  };
  const double spread = 1.0 / (2.0 * std::sqrt(m));
  const double lo = std::max(0.0, 1.0 - 8.0 * spread);
  double total = 0.0;
  if (lo > 0.0) total += integrate(f, 0.0, lo, quad).value;
  total += integrate(f, lo, 1.0, quad).value;
  total += integrate_semi_infinite([&](double x) { return f(1.0 + x); }, quad, spread).value;
  return total;
}

// Root of a decreasing map p(x) = target on a bracket grown by doubling.
double solve_decreasing(const std::function<double(double)>& log_p, double log_target,
                        double x0, const char* who) {
  double lo = x0 - 1.0, hi = x0 + 1.0;
  auto h = [&](double x) { return log_p(x) - log_target; };
  int doublings = 0;
  double step = 1.0;
  while (h(lo) < 0.0) {
    lo -= (step *= 2.0);
    if (++doublings > 200) throw ConvergenceError(std::string(who) + ": no lower bracket");
  }
  step = 1.0;
  while (h(hi) > 0.0) {
    hi += (step *= 2.0);
    if (++doublings > 200) throw ConvergenceError(std::string(who) + ": no upper bracket");
  }
  boost::uintmax_t iters = 200;
  auto r = boost::math::tools::toms748_solve(h, lo, hi, boost::math::tools::eps_tolerance<double>(48),
                                             iters);
  return 0.5 * (r.first + r.second);
}

struct Columns {
  std::vector<double> s;
  std::vector<double> s1;
  std::vector<double> s2;
};

Columns columns(const SignalTemplate& t) { return {t.aligned(), t.in_phase(), t.quadrature()}; }

// P(a X₁² + b X₂² > t) for independent standard normals.
double weighted_chi2_tail(double a, double b, double t, const QuadratureSpec& quad) {
  if (t <= 0.0) return 1.0;
  if (std::abs(a - b) <= 1e-14 * std::max(a, b)) return std::exp(-t / (a + b));
  auto f = [&](double phi) {
    const double c = std::cos(phi), s = std::sin(phi);
    return std::exp(-t / (2.0 * (a * c * c + b * s * s)));
  };
  return integrate(f, 0.0, 0.5 * kPi, quad).value / (0.5 * kPi);
}

void eig2(double a, double b, double d, double out[2]) {
  const double half_tr = 0.5 * (a + d);
  const double disc = std::sqrt(0.25 * (a - d) * (a - d) + b * b);
  out[0] = half_tr + disc;
  out[1] = half_tr - disc;
}

}  // namespace

SignalTemplate SignalTemplate::pseudo_random(int n, std::uint64_t seed) {
  if (n < 8) throw DomainError("SignalTemplate: need at least 8 samples");
  Stream stream(seed, 0);
  SignalTemplate t;
  t.samples.resize(static_cast<std::size_t>(n));
  const double chip = 1.0 / std::sqrt(static_cast<double>(n));
  for (auto& v : t.samples) v = stream.uniform() < 0.5 ? -chip : chip;
  return t;
}

void SignalTemplate::validate() const {
  if (samples.size() < 8) throw DomainError("SignalTemplate: need at least 8 samples");
  double e = 0.0;
  for (double v : samples) e += v * v;
  if (std::abs(e - 1.0) > 1e-12) throw DomainError("SignalTemplate: energy must be 1");
  if (energy != 1.0) throw DomainError("SignalTemplate: energy is fixed at 1");
}

std::vector<double> SignalTemplate::aligned() const {
  const std::size_t n = samples.size();
  std::vector<double> out(n);
  const long shift = ((delay % static_cast<long>(n)) + static_cast<long>(n)) % static_cast<long>(n);
  for (std::size_t k = 0; k < n; ++k) out[(k + shift) % n] = samples[k];
  return out;
}

std::vector<double> SignalTemplate::in_phase() const {
  auto s = aligned();
  for (std::size_t k = 0; k < s.size(); ++k) {
    s[k] *= std::cos(2.0 * kPi * carrier_cycles_per_sample * static_cast<double>(k));
  }
  return s;
}

std::vector<double> SignalTemplate::quadrature() const {
  auto s = aligned();
  for (std::size_t k = 0; k < s.size(); ++k) {
    s[k] *= std::sin(2.0 * kPi * carrier_cycles_per_sample * static_cast<double>(k));
  }
  return s;
}

double statistic_coherent(std::span<const double> received, const SignalTemplate& tmpl,
                          double sigma) {
  check_sigma(sigma);
  if (received.size() != tmpl.size()) throw DomainError("statistic_coherent: length mismatch");
  const auto s = tmpl.aligned();
  return kernels::dot(received, s) / sigma;
}

double threshold_coherent_log(double log_gamma, double envelope, double sigma) {
  check_sigma(sigma);
  if (!(envelope > 0.0)) throw DegenerateChannelError("threshold_coherent: zero envelope");
  return sigma * log_gamma / envelope + 0.5 * envelope / sigma;
}

double threshold_coherent(double gamma, double envelope, double sigma) {
  if (!(gamma > 0.0)) throw DomainError("threshold_coherent: gamma must be positive");
  return threshold_coherent_log(std::log(gamma), envelope, sigma);
}

RocPoint averaged_pfa_pd_coherent_log(double log_gamma, double sigma, double m,
                                      const QuadratureSpec& quad) {
  check_sigma(sigma);
  check_m(m);
  // At |h| → 0 the threshold runs to ±∞ with the sign of ln γ.
  auto edge = [log_gamma](double shift) {
    if (log_gamma > 0.0) return 0.0;
    if (log_gamma < 0.0) return 1.0;
    return q_function(shift);
  };
  auto pfa_f = [&](double y) {
    return y > 0.0 ? q_function(sigma * log_gamma / y + 0.5 * y / sigma) : edge(0.0);
  };
  auto pd_f = [&](double y) {
    return y > 0.0 ? q_function(sigma * log_gamma / y - 0.5 * y / sigma) : edge(0.0);
  };
  return {envelope_average(pfa_f, m, quad), envelope_average(pd_f, m, quad)};
}

RocPoint averaged_pfa_pd_coherent(double gamma, double sigma, double m,
                                  const QuadratureSpec& quad) {
  if (!(gamma > 0.0)) throw DomainError("averaged_pfa_pd_coherent: gamma must be positive");
  return averaged_pfa_pd_coherent_log(std::log(gamma), sigma, m, quad);
}

double calibrate_log_gamma_coherent(double target_pfa, double sigma, double m,
                                    const QuadratureSpec& quad) {
  check_pfa(target_pfa);
  auto log_pfa = [&](double lg) {
    return std::log(averaged_pfa_pd_coherent_log(lg, sigma, m, quad).pfa);
  };
  return solve_decreasing(log_pfa, std::log(target_pfa), 0.0, "calibrate_gamma");
}

double calibrate_gamma(double target_pfa, DetectionRegime regime, double sigma, double m,
                       const QuadratureSpec& quad) {
  check_pfa(target_pfa);
  check_sigma(sigma);
  switch (regime) {
    case DetectionRegime::CoherentKnownH:
      return std::exp(calibrate_log_gamma_coherent(target_pfa, sigma, m, quad));
    case DetectionRegime::RayleighMarginal:
      return q_inverse(target_pfa);
    case DetectionRegime::NoCsiQuadratic:
      return -12.0 * sigma * sigma * std::log(target_pfa);
  }
  throw DomainError("calibrate_gamma: unknown regime");
}

double rayleigh_marginal_likelihood(double t, double big_sigma) {
  if (!(big_sigma > 0.0)) throw DomainError("rayleigh_marginal_likelihood: Sigma must be positive");
  const double a = 1.0 + 1.0 / big_sigma;
  // 1 − Q(x) = Q(−x) keeps accuracy for negative T
  return t * std::exp(t * t / (2.0 * a)) * q_function(-t / std::sqrt(a));
}

bool detector_rayleigh_marginal(std::span<const double> received, const SignalTemplate& tmpl,
                                double sigma, double gamma_pp) {
  if (!std::isfinite(gamma_pp)) throw DomainError("detector_rayleigh_marginal: gamma must be finite");
  return statistic_coherent(received, tmpl, sigma) > gamma_pp;
}

double rayleigh_marginal_pd(double pfa, double sigma, double m, const QuadratureSpec& quad) {
  check_pfa(pfa);
  check_sigma(sigma);
  check_m(m);
  const double g = q_inverse(pfa);
  return envelope_average([&](double y) { return q_function(g - y / sigma); }, m, quad);
}

double statistic_nocsi_quadratic(std::span<const double> received, const SignalTemplate& tmpl) {
  if (received.size() != tmpl.size()) throw DomainError("statistic_nocsi_quadratic: length mismatch");
  const auto s1 = tmpl.in_phase();
  const auto s2 = tmpl.quadrature();
  const double a = kernels::dot(received, s1);
  const double b = kernels::dot(received, s2);
  return (a * a + b * b) / static_cast<double>(received.size());
}

QuadraticDecision detector_nocsi_quadratic(std::span<const double> received,
                                           const SignalTemplate& tmpl, double sigma, double gamma) {
  check_sigma(sigma);
  const double L = statistic_nocsi_quadratic(received, tmpl);
  return {L > gamma, L};
}

double nocsi_pfa_printed(double gamma, double sigma) {
  check_sigma(sigma);
  return std::exp(-gamma / (12.0 * sigma * sigma));
}

double nocsi_pd_printed(double pfa, double sigma, int n) {
  check_sigma(sigma);
  return std::pow(pfa, 1.0 / (1.0 + n / (4.0 * sigma * sigma)));
}

QuadraticLaw::QuadraticLaw(const SignalTemplate& tmpl, double sigma) {
  check_sigma(sigma);
  const auto s1 = tmpl.in_phase();
  const auto s2 = tmpl.quadrature();
  const double g11 = kernels::scalar::dot(s1, s1);
  const double g12 = kernels::scalar::dot(s1, s2);
  const double g22 = kernels::scalar::dot(s2, s2);
  double mu[2];
  eig2(g11, g12, g22, mu);
  const double s2v = sigma * sigma;
  n_ = static_cast<double>(tmpl.size());
  for (int k = 0; k < 2; ++k) {
    // Sᵀr has covariance σ²G under H0 and ½G² + σ²G under H1; they share
    // eigenvectors with G.
    h0_[k] = s2v * mu[k];
    h1_[k] = 0.5 * mu[k] * mu[k] + s2v * mu[k];
  }
}

double QuadraticLaw::pfa(double gamma) const {
  return weighted_chi2_tail(h0_[0], h0_[1], n_ * gamma, QuadratureSpec{});
}

double QuadraticLaw::pd(double gamma) const {
  return weighted_chi2_tail(h1_[0], h1_[1], n_ * gamma, QuadratureSpec{});
}

double QuadraticLaw::gamma_for_pfa(double p) const {
  check_pfa(p);
  if (std::abs(h0_[0] - h0_[1]) <= 1e-14 * h0_[0]) {
    return -(h0_[0] + h0_[1]) * std::log(p) / n_;
  }
  auto log_pfa = [&](double lg) { return std::log(pfa(std::exp(lg))); };
  return std::exp(solve_decreasing(log_pfa, std::log(p), 0.0, "QuadraticLaw"));
}

AnchorObservation simulate_anchor(DetectionRegime regime, const SignalTemplate& tmpl,
                                  double sigma, double m, bool node_present, Stream& stream) {
  const Columns col = columns(tmpl);
  const std::size_t n = col.s.size();
  AnchorObservation obs;
  // The channel is drawn under both hypotheses: the coherent threshold
  // depends on it even when no signal is present.
  const double y = std::sqrt(stream.gamma(m, 1.0 / m));
  const double theta = stream.uniform(0.0, 2.0 * kPi);
  obs.envelope = y;
  std::vector<double> r(n);
  for (std::size_t k = 0; k < n; ++k) r[k] = sigma * stream.normal();
  if (node_present) {
    if (regime == DetectionRegime::NoCsiQuadratic) {
      const double hr = y * std::cos(theta), hi = y * std::sin(theta);
      for (std::size_t k = 0; k < n; ++k) r[k] += hr * col.s1[k] + hi * col.s2[k];
    } else {
      for (std::size_t k = 0; k < n; ++k) r[k] += y * col.s[k];
    }
  }
  if (regime == DetectionRegime::NoCsiQuadratic) {
    const double a = kernels::dot(r, col.s1);
    const double b = kernels::dot(r, col.s2);
    obs.statistic = (a * a + b * b) / static_cast<double>(n);
  } else {
    obs.statistic = kernels::dot(r, col.s) / sigma;
  }
  return obs;
}

bool decide(DetectionRegime regime, double threshold, const AnchorObservation& obs, double sigma) {
  if (regime == DetectionRegime::CoherentKnownH) {
    if (!(obs.envelope > 0.0)) return threshold < 0.0;  // γ′ → ∓∞ as |h| → 0
    return obs.statistic > threshold_coherent_log(threshold, obs.envelope, sigma);
  }
  return obs.statistic > threshold;
}

double threshold_for_pfa(DetectionRegime regime, double target, const SignalTemplate& tmpl,
                         double sigma, double m, const QuadratureSpec& quad) {
  check_pfa(target);
  switch (regime) {
    case DetectionRegime::CoherentKnownH:
      return calibrate_log_gamma_coherent(target, sigma, m, quad);
    case DetectionRegime::RayleighMarginal:
      return q_inverse(target);
    case DetectionRegime::NoCsiQuadratic:
      return QuadraticLaw(tmpl, sigma).gamma_for_pfa(target);
  }
  throw DomainError("threshold_for_pfa: unknown regime");
}

RocPoint analytic_point(DetectionRegime regime, double threshold, const SignalTemplate& tmpl,
                        double sigma, double m, const QuadratureSpec& quad) {
  switch (regime) {
    case DetectionRegime::CoherentKnownH:
      return averaged_pfa_pd_coherent_log(threshold, sigma, m, quad);
    case DetectionRegime::RayleighMarginal: {
      const double pfa = q_function(threshold);
      return {pfa, envelope_average([&](double y) { return q_function(threshold - y / sigma); }, m,
                                    quad)};
    }
    case DetectionRegime::NoCsiQuadratic:
      if (m != 1.0) throw UnsupportedRegimeError("analytic_point: no-CSI law derived for m = 1");
      return QuadraticLaw(tmpl, sigma).at(threshold);
  }
  throw DomainError("analytic_point: unknown regime");
}

std::vector<McRocPoint> monte_carlo_points(DetectionRegime regime,
                                           std::span<const double> thresholds,
                                           const SignalTemplate& tmpl, double sigma, double m,
                                           std::size_t trials, std::uint64_t seed) {
  check_sigma(sigma);
  check_m(m);
  tmpl.validate();
  if (trials < 1) throw DomainError("monte_carlo_points: need at least one trial");
  std::vector<AnchorObservation> h0(trials), h1(trials);
  parallel_for(trials, [&](std::size_t t) {
    Stream s0(seed, 2 * t);
    Stream s1(seed, 2 * t + 1);
    h0[t] = simulate_anchor(regime, tmpl, sigma, m, false, s0);
    h1[t] = simulate_anchor(regime, tmpl, sigma, m, true, s1);
  });
  std::vector<McRocPoint> out;
  out.reserve(thresholds.size());
  const double n = static_cast<double>(trials);
  for (double th : thresholds) {
    std::size_t fa = 0, det = 0;
    for (std::size_t t = 0; t < trials; ++t) {
      fa += decide(regime, th, h0[t], sigma);
      det += decide(regime, th, h1[t], sigma);
    }
    McRocPoint p;
    p.point = {fa / n, det / n};
    p.pfa_se = std::sqrt(p.point.pfa * (1.0 - p.point.pfa) / n);
    p.pd_se = std::sqrt(p.point.pd * (1.0 - p.point.pd) / n);
    p.trials = trials;
    out.push_back(p);
  }
  return out;
}

std::vector<OptimalityRow> verify_threshold_optimality(double sigma, double m,
                                                       std::span<const double> pfa_grid,
                                                       std::size_t trials, std::uint64_t seed,
                                                       int samples, const QuadratureSpec& quad) {
  check_sigma(sigma);
  check_m(m);
  if (trials < 2) throw DomainError("verify_threshold_optimality: need at least 2 trials");
  const SignalTemplate tmpl = SignalTemplate::pseudo_random(samples);
  std::vector<AnchorObservation> h0(trials), h1(trials);
  parallel_for(trials, [&](std::size_t t) {
    Stream s0(seed, 2 * t);
    Stream s1(seed, 2 * t + 1);
    h0[t] = simulate_anchor(DetectionRegime::CoherentKnownH, tmpl, sigma, m, false, s0);
    h1[t] = simulate_anchor(DetectionRegime::CoherentKnownH, tmpl, sigma, m, true, s1);
  });
  std::vector<OptimalityRow> rows;
  const double n = static_cast<double>(trials);
  for (double target : pfa_grid) {
    OptimalityRow row;
    row.target_pfa = target;
    row.log_gamma = calibrate_log_gamma_coherent(target, sigma, m, quad);
    row.gamma_constant = q_inverse(target);
    row.pd_channel = averaged_pfa_pd_coherent_log(row.log_gamma, sigma, m, quad).pd;
    row.pd_constant = rayleigh_marginal_pd(target, sigma, m, quad);
    double fa_c = 0, fa_k = 0, d_c = 0, d_k = 0, sum = 0, sum2 = 0;
    for (std::size_t t = 0; t < trials; ++t) {
      fa_c += decide(DetectionRegime::CoherentKnownH, row.log_gamma, h0[t], sigma);
      fa_k += decide(DetectionRegime::RayleighMarginal, row.gamma_constant, h0[t], sigma);
      const double a = decide(DetectionRegime::CoherentKnownH, row.log_gamma, h1[t], sigma);
      const double b = decide(DetectionRegime::RayleighMarginal, row.gamma_constant, h1[t], sigma);
      d_c += a;
      d_k += b;
      sum += a - b;
      sum2 += (a - b) * (a - b);
    }
    row.pfa_channel_mc = fa_c / n;
    row.pfa_constant_mc = fa_k / n;
    row.pd_channel_mc = d_c / n;
    row.pd_constant_mc = d_k / n;
    row.gap_mc = sum / n;
    const double var = std::max(0.0, (sum2 - n * row.gap_mc * row.gap_mc) / (n - 1.0));
    row.gap_ci95 = 1.96 * std::sqrt(var / n);
    row.dominates = row.gap_mc + row.gap_ci95 >= 0.0;
    row.separated = row.gap_mc - row.gap_ci95 > 0.0;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace locfade
