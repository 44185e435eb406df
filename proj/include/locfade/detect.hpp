#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "locfade/numerics.hpp"
#include "locfade/random.hpp"

namespace locfade {

enum class DetectionRegime { CoherentKnownH, RayleighMarginal, NoCsiQuadratic };

/// Unit-energy pulse s[n] with circular delay n_i. The in-phase and
/// quadrature columns are s[n]·cos(2π f n) and s[n]·sin(2π f n).
struct SignalTemplate {
  std::vector<double> samples;
  int delay = 0;
  double energy = 1.0;
  double carrier_cycles_per_sample = 0.25;

  /// ±1/√N chips from a fixed stream.
  static SignalTemplate pseudo_random(int n, std::uint64_t seed = 0x5eedULL);

  void validate() const;
  std::size_t size() const { return samples.size(); }
  std::vector<double> aligned() const;     // s[n − n_i]
  std::vector<double> in_phase() const;    // aligned · cos
  std::vector<double> quadrature() const;  // aligned · sin
};

struct RocPoint {
  double pfa = 0.0;
  double pd = 0.0;
};

/// T = Σ r[n] s[n − n_i] / σ: N(0, 1) under H0, N(|h|/σ, 1) given |h| under H1.
double statistic_coherent(std::span<const double> received, const SignalTemplate& tmpl,
                          double sigma);

/// γ′(|h|) = σ ln γ / |h| + |h| / (2σ).
double threshold_coherent(double gamma, double envelope, double sigma);
double threshold_coherent_log(double log_gamma, double envelope, double sigma);

/// Fading-averaged (pfa, pd) of the channel-dependent threshold.
RocPoint averaged_pfa_pd_coherent(double gamma, double sigma, double m,
                                  const QuadratureSpec& quad = {});
RocPoint averaged_pfa_pd_coherent_log(double log_gamma, double sigma, double m,
                                      const QuadratureSpec& quad = {});

/// ln γ giving averaged pfa = target for the channel-dependent threshold.
double calibrate_log_gamma_coherent(double target_pfa, double sigma, double m,
                                    const QuadratureSpec& quad = {});

/// Threshold for the regime's own statistic at the requested pfa:
/// CoherentKnownH → γ, RayleighMarginal → γ″ = Q⁻¹(pfa),
/// NoCsiQuadratic → γ from the printed closed form exp(−γ/(12σ²)).
double calibrate_gamma(double target_pfa, DetectionRegime regime, double sigma, double m,
                       const QuadratureSpec& quad = {});

/// Lᵢ(T) = T exp(T²/(2a)) (1 − Q(T/√a)), a = 1 + 1/Σ. Σ defaults to 1/σ².
double rayleigh_marginal_likelihood(double t, double big_sigma);

bool detector_rayleigh_marginal(std::span<const double> received, const SignalTemplate& tmpl,
                                double sigma, double gamma_pp);

/// Averaged pd of the constant threshold γ″ = Q⁻¹(pfa): E[Q(γ″ − |h|/σ)].
double rayleigh_marginal_pd(double pfa, double sigma, double m, const QuadratureSpec& quad = {});

struct QuadraticDecision {
  bool decision = false;
  double statistic = 0.0;
};

/// L = (1/N) rᵀ S Sᵀ r with S = [in-phase, quadrature].
double statistic_nocsi_quadratic(std::span<const double> received, const SignalTemplate& tmpl);
QuadraticDecision detector_nocsi_quadratic(std::span<const double> received,
                                           const SignalTemplate& tmpl, double sigma, double gamma);

/// Closed forms as printed: pfa = exp(−γ/(12σ²)), pd = pfa^{1/(1+N/(4σ²))}.
double nocsi_pfa_printed(double gamma, double sigma);
double nocsi_pd_printed(double pfa, double sigma, int n);

/// Exact law of the quadratic statistic for a given template under
/// Rayleigh fading (h_R, h_I ~ N(0, ½)). SᵀS sets the χ² weights.
class QuadraticLaw {
 public:
  QuadraticLaw(const SignalTemplate& tmpl, double sigma);

  double pfa(double gamma) const;
  double pd(double gamma) const;
  double gamma_for_pfa(double pfa) const;
  RocPoint at(double gamma) const { return {pfa(gamma), pd(gamma)}; }

 private:
  double n_ = 0.0;
  double h0_[2] = {0.0, 0.0};  // eigenvalues of cov(Sᵀr) under H0
  double h1_[2] = {0.0, 0.0};
};

/// One anchor's observation in a simulated trial.
struct AnchorObservation {
  double statistic = 0.0;
  double envelope = 0.0;  // |h|; 0 under H0
};

/// Simulates r[n] sample by sample and returns the regime's statistic.
/// Coherent regimes see |h| s + w; the no-CSI regime sees h_R s₁ + h_I s₂ + w.
AnchorObservation simulate_anchor(DetectionRegime regime, const SignalTemplate& tmpl,
                                  double sigma, double m, bool node_present, Stream& stream);

/// Decision for a simulated observation. `threshold` is ln γ for
/// CoherentKnownH, γ″ for RayleighMarginal and γ for NoCsiQuadratic.
bool decide(DetectionRegime regime, double threshold, const AnchorObservation& obs, double sigma);

/// Regime threshold giving local pfa `target` under the module's analytic law
/// (for NoCsiQuadratic the exact law, not the printed one).
double threshold_for_pfa(DetectionRegime regime, double target, const SignalTemplate& tmpl,
                         double sigma, double m, const QuadratureSpec& quad = {});
/// Analytic (pfa, pd) at a regime threshold.
RocPoint analytic_point(DetectionRegime regime, double threshold, const SignalTemplate& tmpl,
                        double sigma, double m, const QuadratureSpec& quad = {});

struct McRocPoint {
  RocPoint point;
  double pfa_se = 0.0;
  double pd_se = 0.0;
  std::size_t trials = 0;
};

/// Monte Carlo twin of analytic_point: `trials` H0 and `trials` H1 draws,
/// trial t on streams (seed, 2t) and (seed, 2t + 1).
std::vector<McRocPoint> monte_carlo_points(DetectionRegime regime,
                                           std::span<const double> thresholds,
                                           const SignalTemplate& tmpl, double sigma, double m,
                                           std::size_t trials, std::uint64_t seed);

struct OptimalityRow {
  double target_pfa = 0.0;
  double log_gamma = 0.0;        // channel-dependent threshold parameter
  double gamma_constant = 0.0;   // γ″
  double pd_channel = 0.0;       // analytic
  double pd_constant = 0.0;      // analytic
  double pd_channel_mc = 0.0;
  double pd_constant_mc = 0.0;
  double pfa_channel_mc = 0.0;
  double pfa_constant_mc = 0.0;
  double gap_mc = 0.0;           // paired mean of the decision difference
  double gap_ci95 = 0.0;
  bool dominates = false;        // gap_mc + gap_ci95 ≥ 0
  bool separated = false;        // gap_mc − gap_ci95 > 0
};

/// Channel-dependent threshold against the pfa-matched constant threshold,
/// with common random numbers for the Monte Carlo gap.
std::vector<OptimalityRow> verify_threshold_optimality(double sigma, double m,
                                                       std::span<const double> pfa_grid,
                                                       std::size_t trials, std::uint64_t seed,
                                                       int samples = 64,
                                                       const QuadratureSpec& quad = {});

}  // namespace locfade
