#include "locfade/simkit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <tuple>

#include "locfade/bounds.hpp"
#include "locfade/errors.hpp"
#include "locfade/fusion.hpp"
#include "locfade/parallel.hpp"
#include "locfade/toa.hpp"

namespace locfade {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string k_tag(int k) { return "K=" + std::to_string(k); }

// Per-trial, per-anchor observations under both hypotheses. Observation
// (t, i, h) lives at index (t·M + i)·2 + h and draws from stream
// (seed, that index), so every regime sees the same random numbers.
std::vector<AnchorObservation> simulate_network(DetectionRegime regime, const SignalTemplate& tmpl,
                                                const std::vector<double>& sigmas, double m,
                                                std::size_t trials, std::uint64_t seed) {
  const std::size_t M = sigmas.size();
  std::vector<AnchorObservation> obs(trials * M * 2);
  parallel_for(trials, [&](std::size_t t) {
    for (std::size_t i = 0; i < M; ++i) {
      for (int h = 0; h < 2; ++h) {
        const std::size_t idx = (t * M + i) * 2 + static_cast<std::size_t>(h);
        Stream stream(seed, idx);
        obs[idx] = simulate_anchor(regime, tmpl, sigmas[i], m, h == 1, stream);
      }
    }
  });
  return obs;
}

struct FusedCounts {
  double pfa = 0.0;
  double pd = 0.0;
};

FusedCounts fused_mc(const std::vector<AnchorObservation>& obs, DetectionRegime regime,
                     const std::vector<double>& thresholds, const std::vector<double>& sigmas,
                     int k, std::size_t trials) {
  const std::size_t M = sigmas.size();
  std::size_t fa = 0, det = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    int ones0 = 0, ones1 = 0;
    for (std::size_t i = 0; i < M; ++i) {
      const std::size_t base = (t * M + i) * 2;
      ones0 += decide(regime, thresholds[i], obs[base], sigmas[i]);
      ones1 += decide(regime, thresholds[i], obs[base + 1], sigmas[i]);
    }
    fa += ones0 >= k;
    det += ones1 >= k;
  }
  const double n = static_cast<double>(trials);
  return {fa / n, det / n};
}

double binomial_ci(double p, std::size_t n) { return 1.96 * std::sqrt(p * (1.0 - p) / n); }

// Per-anchor thresholds at a common local pfa and the analytic local pds.
struct LocalDesign {
  std::vector<double> thresholds;
  std::vector<double> pds;
};

LocalDesign design_local(DetectionRegime regime, double p_local, const SignalTemplate& tmpl,
                         const std::vector<double>& sigmas, double m) {
  LocalDesign d;
  for (double s : sigmas) {
    const double th = threshold_for_pfa(regime, p_local, tmpl, s, m);
    d.thresholds.push_back(th);
    d.pds.push_back(analytic_point(regime, th, tmpl, s, m).pd);
  }
  return d;
}

double fused_pd(const std::vector<double>& pds, const FusionRule& rule, bool heterogeneous) {
  if (heterogeneous) return fused_probability_heterogeneous(pds, rule.k);
  return fused_probability(pds.front(), rule);
}

double awgn_local_pd(double p_local, double sigma) { return q_function(q_inverse(p_local) - 1.0 / sigma); }

bool uniform(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

}  // namespace

void Scenario::validate() const {
  if (anchors.empty()) throw DomainError("anchors: need ≥1 anchor");
  for (const auto& p : anchors) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw DomainError("anchors: positions must be finite");
  }
  if (nodes.empty()) throw DomainError("nodes: need ≥1 node");
  for (const auto& p : nodes) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw DomainError("nodes: positions must be finite");
  }
  if (!(c > 0.0)) throw DomainError("c: must be positive");
  if (!(m >= 0.5)) throw DomainError("m: must be >= 0.5");
  if (dimension != 1 && dimension != 2) throw DomainError("dimension: must be 1 or 2");
  if (sigma_scale) {
    if (sigma_scale->size() != anchors.size()) throw DomainError("sigma_scale: needs one entry per anchor");
    for (double s : *sigma_scale) {
      if (!(s > 0.0)) throw DomainError("sigma_scale: entries must be positive");
    }
  }
  if (detection_snr_offsets_db) {
    if (detection_snr_offsets_db->size() != anchors.size()) {
      throw DomainError("detection_snr_offsets_db: needs one entry per anchor");
    }
    if (!heterogeneous_fusion && !uniform(*detection_snr_offsets_db)) {
      throw DomainError("detection_snr_offsets_db: unequal offsets need heterogeneous_fusion");
    }
  }
  if (samples < 8) throw DomainError("samples: must be >= 8");
  const int M = static_cast<int>(anchors.size());
  for (int k : k_values) {
    if (k < 1 || k > M) throw DomainError("k_values: entries must lie in 1..M");
  }
  if (k < 1 || k > M) throw DomainError("k: must lie in 1..M");
  if (central_k && (*central_k < 1 || *central_k > M)) throw DomainError("central_k: must lie in 1..M");
  auto probs = [](const std::vector<double>& v, const char* what) {
    for (double p : v) {
      if (!(p > 0.0 && p < 1.0)) throw DomainError(std::string(what) + ": entries must lie in (0, 1)");
    }
  };
  probs(pfa_grid, "pfa_grid");
  probs(alpha_grid, "alpha_grid");
  if (!(pfa_total > 0.0 && pfa_total < 1.0)) throw DomainError("pfa_total: must lie in (0, 1)");
  if (!(pd_level > 0.0 && pd_level < 1.0)) throw DomainError("pd_level: must lie in (0, 1)");
  for (double mm : m_grid) {
    if (!(mm >= 0.5)) throw DomainError("m_grid: entries must be >= 0.5");
  }
  if (snr_db_grid.empty()) throw DomainError("snr_db_grid: must not be empty");
  if (detection_snr_grid.empty()) throw DomainError("detection_snr_grid: must not be empty");
  if (estimators.empty()) throw DomainError("estimators: must not be empty");
  if (detectors.empty()) throw DomainError("detectors: must not be empty");
  if (pfa_grid.empty()) throw DomainError("pfa_grid: must not be empty");
  if (grid_points_per_axis < 11) throw DomainError("grid_points_per_axis: must be >= 11");
  if (trials < 1) throw DomainError("trials: must be >= 1");
}

double Scenario::estimation_sigma(double snr_db) const {
  return 1.0 / (c * std::pow(10.0, snr_db / 20.0));
}

std::vector<double> Scenario::anchor_sigmas(double sigma) const {
  std::vector<double> out(anchors.size(), sigma);
  if (sigma_scale) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= (*sigma_scale)[i];
  }
  return out;
}

double detection_sigma(double snr_db) { return std::pow(10.0, -snr_db / 20.0); }

std::vector<double> detection_sigmas(const Scenario& scenario, double snr_db) {
  std::vector<double> out(scenario.anchors.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double off = scenario.detection_snr_offsets_db ? (*scenario.detection_snr_offsets_db)[i] : 0.0;
    out[i] = detection_sigma(snr_db + off);
  }
  return out;
}

std::vector<ResultRow> ExperimentResult::sorted_rows() const {
  auto out = rows;
  std::stable_sort(out.begin(), out.end(), [](const ResultRow& a, const ResultRow& b) {
    return std::tie(a.series, a.x) < std::tie(b.series, b.x);
  });
  return out;
}

std::vector<std::pair<double, double>> ExperimentResult::series(const std::string& name) const {
  std::vector<std::pair<double, double>> out;
  for (const auto& r : rows) {
    if (r.series == name) out.emplace_back(r.x, r.y);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string regime_name(DetectionRegime r) {
  switch (r) {
    case DetectionRegime::CoherentKnownH: return "known";
    case DetectionRegime::RayleighMarginal: return "marginal";
    case DetectionRegime::NoCsiQuadratic: return "nocsi";
  }
  return "?";
}

std::string regime_name(EstimatorRegime r) {
  switch (r) {
    case EstimatorRegime::AwgnLs: return "awgn_ls";
    case EstimatorRegime::NakagamiMl: return "nakagami_ml";
    case EstimatorRegime::NoCsiMl: return "nocsi_ml";
  }
  return "?";
}

ExperimentResult run_crlb_sweep(const Scenario& scenario) {
  scenario.validate();
  ExperimentResult res;
  res.experiment = "crlb-sweep";
  res.x_label = "SNR = 1/(c^2 sigma^2) [dB]";
  res.y_label = "CRLB [m^2]";
  res.log_y = true;
  const Point node = scenario.nodes.front();
  const auto& A = scenario.anchors;
  const int dim = scenario.dimension;
  const double c = scenario.c;
  double worst_ratio_gap = 0.0;
  for (double snr : scenario.snr_db_grid) {
    const double sigma = scenario.estimation_sigma(snr);
    const auto sig = scenario.anchor_sigmas(sigma);
    std::vector<double> w_awgn(A.size()), w_nc(A.size()), w_nq(A.size());
    double a_max = 0.0;
    for (std::size_t i = 0; i < A.size(); ++i) {
      const double d = distance(A[i], node);
      w_awgn[i] = 1.0 / (c * c * sig[i] * sig[i]);
      w_nc[i] = nocsi_information(d, sig[i], c, BoundMethod::ClosedForm);
      w_nq[i] = nocsi_information(d, sig[i], c, BoundMethod::Quadrature);
      a_max = std::max(a_max, d / (c * sig[i]));
    }
    const double awgn = fisher_from_weights(A, node, w_awgn, dim).crlb();
    const double mod = scenario.sigma_scale ? awgn : mcrlb(A, node, sigma, c, dim).crlb;
    const auto nak_c = crlb_nakagami(A, node, sig, c, scenario.m, dim, BoundMethod::ClosedForm);
    const auto nak_q = crlb_nakagami(A, node, sig, c, scenario.m, dim, BoundMethod::Quadrature);
    const double noc_c = fisher_from_weights(A, node, w_nc, dim).crlb();
    const double noc_q = fisher_from_weights(A, node, w_nq, dim).crlb();
    res.add(snr, "awgn", awgn);
    res.add(snr, "mcrlb", mod);
    res.add(snr, "nakagami_closed", nak_c.crlb);
    res.add(snr, "nakagami_quadrature", nak_q.crlb);
    res.add(snr, "nocsi_closed", noc_c);
    res.add(snr, "nocsi_quadrature", noc_q);
    res.add(snr, "ratio_nakagami_closed", nak_c.crlb / awgn);
    res.add(snr, "ratio_nakagami_quadrature", nak_q.crlb / awgn);
    res.add(snr, "ratio_nocsi_closed", noc_c / awgn);
    res.add(snr, "ratio_nocsi_quadrature", noc_q / awgn);
    res.add(snr, "max_d_over_c_sigma", a_max);
    if (a_max <= 0.1) {
      worst_ratio_gap = std::max(worst_ratio_gap, std::abs(nak_q.crlb / nak_c.crlb - 1.0));
    }
  }
  res.note("m", fmt(scenario.m));
  res.note("nocsi_fading", "Rayleigh (m = 1)");
  res.note("max_quadrature_vs_closed_gap_where_d_over_c_sigma_le_0.1", fmt(worst_ratio_gap));
  return res;
}

ExperimentResult run_k_ratio_curve(const std::vector<double>& m_grid) {
  ExperimentResult res;
  res.experiment = "k-ratio";
  res.x_label = "Nakagami m";
  res.y_label = "k";
  res.log_x = true;
  for (double m : m_grid) {
    const double k = loss_ratio_k(m);
    res.add(m, "k", k);
    res.add(m, "k_db", 10.0 * std::log10(k));
  }
  return res;
}

ExperimentResult run_mle_comparison(const Scenario& scenario, std::size_t trials, std::uint64_t seed) {
  scenario.validate();
  ExperimentResult res;
  res.experiment = "mle-compare";
  res.x_label = "SNR = 1/(c^2 sigma^2) [dB]";
  res.y_label = "MSE [m^2]";
  res.log_y = true;
  res.seed = seed;
  const Point node = scenario.nodes.front();
  std::size_t boundary = 0, multimodal = 0;
  for (double snr : scenario.snr_db_grid) {
    const double sigma = scenario.estimation_sigma(snr);
    const auto sig = scenario.anchor_sigmas(sigma);
    const ToaModel truth{ToaRegime::NakagamiMarginal, sigma, scenario.c, scenario.m};
    for (EstimatorRegime r : scenario.estimators) {
      EstimatorSpec spec;
      spec.regime = r;
      spec.m = scenario.m;
      spec.sigma = sigma;
      spec.c = scenario.c;
      spec.dimension = scenario.dimension;
      spec.search.grid_points_per_axis = scenario.grid_points_per_axis;
      MseResult mse;
      if (scenario.sigma_scale) {
        // unequal σ: draw with per-anchor spreads, estimator sees them too
        const LocationEstimator est(scenario.anchors, spec);
        std::vector<double> err(trials);
        parallel_for(trials, [&](std::size_t t) {
          Stream stream(seed, t);
          const auto sample = sample_toa(node, scenario.anchors, truth, nullptr, stream, sig);
          const auto e = est(sample);
          const Point dz = e.position - node;
          err[t] = dz.x * dz.x + dz.y * dz.y;
        });
        double s = 0.0, s2 = 0.0;
        for (double e : err) s += e;
        mse.mse = s / trials;
        for (double e : err) s2 += (e - mse.mse) * (e - mse.mse);
        mse.ci95 = trials > 1 ? 1.96 * std::sqrt(s2 / (trials - 1) / trials) : 0.0;
        mse.trials = trials;
      } else {
        mse = evaluate_mse(spec, scenario.anchors, node, truth, trials, seed);
      }
      boundary += mse.boundary_trials;
      multimodal += mse.multimodal_trials;
      res.add_mc(snr, regime_name(r), mse.mse, mse.ci95, mse.trials);
    }
    const auto bound = crlb_nakagami(scenario.anchors, node, sig, scenario.c, scenario.m,
                                     scenario.dimension, BoundMethod::Quadrature);
    res.add(snr, "crlb_nakagami_quadrature", bound.crlb);
  }
  res.note("boundary_trials", std::to_string(boundary));
  res.note("multimodal_trials", std::to_string(multimodal));
  return res;
}

ExperimentResult run_roc(const Scenario& scenario, const std::vector<DetectionRegime>& regimes,
                         const std::vector<int>& k_values, std::size_t trials, std::uint64_t seed) {
  scenario.validate();
  ExperimentResult res;
  res.experiment = "roc";
  res.x_label = "fused Pfa";
  res.y_label = "fused Pd";
  res.log_x = true;
  res.seed = seed;
  const int M = static_cast<int>(scenario.anchors.size());
  const auto sig = detection_sigmas(scenario, scenario.detection_snr_db);
  const bool het = scenario.heterogeneous_fusion;
  const SignalTemplate tmpl = SignalTemplate::pseudo_random(scenario.samples);
  for (int k : k_values) {
    const FusionRule rule{k, M};
    for (double alpha : scenario.pfa_grid) {
      const double p = local_for_fused(alpha, rule);
      std::vector<double> pds;
      for (double s : sig) pds.push_back(awgn_local_pd(p, s));
      res.add(alpha, "awgn/" + k_tag(k) + "/analytic", fused_pd(pds, rule, het));
    }
  }
  for (DetectionRegime regime : regimes) {
    const std::string name = regime_name(regime);
    const bool analytic = !(regime == DetectionRegime::NoCsiQuadratic && scenario.m != 1.0);
    std::vector<AnchorObservation> obs;
    if (trials > 0) obs = simulate_network(regime, tmpl, sig, scenario.m, trials, seed);
    for (int k : k_values) {
      const FusionRule rule{k, M};
      for (double alpha : scenario.pfa_grid) {
        const double p = local_for_fused(alpha, rule);
        std::vector<double> th;
        if (analytic) {
          const LocalDesign d = design_local(regime, p, tmpl, sig, scenario.m);
          th = d.thresholds;
          res.add(alpha, name + "/" + k_tag(k) + "/analytic", fused_pd(d.pds, rule, het));
        } else {
          for (double s : sig) th.push_back(threshold_for_pfa(regime, p, tmpl, s, 1.0));
        }
        if (trials > 0) {
          const FusedCounts mc = fused_mc(obs, regime, th, sig, k, trials);
          res.add_mc(alpha, name + "/" + k_tag(k) + "/mc", mc.pd, binomial_ci(mc.pd, trials), trials);
          res.add_mc(alpha, name + "/" + k_tag(k) + "/mc_pfa", mc.pfa, binomial_ci(mc.pfa, trials), trials);
        }
      }
    }
  }
  res.note("snr_db", fmt(scenario.detection_snr_db));
  res.note("samples", std::to_string(scenario.samples));
  res.note("fusion", het ? "poisson-binomial" : "binomial");
  return res;
}

ExperimentResult run_pd_vs_snr(const Scenario& scenario, double pfa_total, int k,
                               std::size_t trials, std::uint64_t seed) {
  scenario.validate();
  if (!(pfa_total > 0.0 && pfa_total < 1.0)) throw DomainError("run_pd_vs_snr: pfa_total must lie in (0, 1)");
  ExperimentResult res;
  res.experiment = "pd-vs-snr";
  res.x_label = "SNR [dB]";
  res.y_label = "fused Pd";
  res.seed = seed;
  const int M = static_cast<int>(scenario.anchors.size());
  const FusionRule rule{k, M};
  const bool het = scenario.heterogeneous_fusion;
  const double p = local_for_fused(pfa_total, rule);
  const SignalTemplate tmpl = SignalTemplate::pseudo_random(scenario.samples);
  std::size_t point = 0;
  for (double snr : scenario.detection_snr_grid) {
    const auto sig = detection_sigmas(scenario, snr);
    std::vector<double> pds;
    for (double s : sig) pds.push_back(awgn_local_pd(p, s));
    res.add(snr, "awgn/analytic", fused_pd(pds, rule, het));
    for (DetectionRegime regime : scenario.detectors) {
      const std::string name = regime_name(regime);
      const LocalDesign d = design_local(regime, p, tmpl, sig, scenario.m);
      res.add(snr, name + "/analytic", fused_pd(d.pds, rule, het));
      if (trials > 0) {
        // a distinct block of streams per SNR point
        const auto obs = simulate_network(regime, tmpl, sig, scenario.m, trials,
                                          seed + 0x9e3779b97f4a7c15ULL * (point + 1));
        const FusedCounts mc = fused_mc(obs, regime, d.thresholds, sig, k, trials);
        res.add_mc(snr, name + "/mc", mc.pd, binomial_ci(mc.pd, trials), trials);
      }
    }
    ++point;
  }
  res.note("pfa_total", fmt(pfa_total));
  res.note("k", std::to_string(k));
  res.note("local_pfa", fmt(p));
  res.note("pd_level", fmt(scenario.pd_level));
  for (const std::string s : {"awgn", "known", "marginal", "nocsi"}) {
    const auto x = crossing(res, s + "/analytic", scenario.pd_level);
    res.note("snr_at_pd_level/" + s, x ? fmt(*x) : "not reached");
  }
  return res;
}

ExperimentResult run_k_sweep(const Scenario& scenario) {
  scenario.validate();
  ExperimentResult res;
  res.experiment = "k-sweep";
  res.x_label = "fused Pfa (alpha)";
  res.y_label = "fused Pd / best K";
  res.log_x = true;
  const int M = static_cast<int>(scenario.anchors.size());
  const auto sig = detection_sigmas(scenario, scenario.detection_snr_db);
  const bool het = scenario.heterogeneous_fusion;
  const SignalTemplate tmpl = SignalTemplate::pseudo_random(scenario.samples);
  for (DetectionRegime regime : scenario.detectors) {
    const std::string name = regime_name(regime);
    for (double alpha : scenario.alpha_grid) {
      int best_k = 0;
      double best = -1.0;
      for (int k = 1; k <= M; ++k) {
        const FusionRule rule{k, M};
        const double p = local_for_fused(alpha, rule);
        const LocalDesign d = design_local(regime, p, tmpl, sig, scenario.m);
        const double pd = fused_pd(d.pds, rule, het);
        res.add(alpha, name + "/pd_" + k_tag(k), pd);
        if (pd > best + 1e-12) {
          best = pd;
          best_k = k;
        }
      }
      if (!het) {
        // the library selector must agree with the sweep above
        const double s0 = sig.front();
        const auto choice = choose_k(
            [&](double pl) {
              return analytic_point(regime, threshold_for_pfa(regime, pl, tmpl, s0, scenario.m), tmpl,
                                    s0, scenario.m)
                  .pd;
            },
            alpha, M);
        best_k = choice.k_star;
        best = choice.pd_total;
      }
      res.add(alpha, name + "/k_star", best_k);
      res.add(alpha, name + "/pd_best", best);
    }
  }
  res.note("snr_db", fmt(scenario.detection_snr_db));
  return res;
}

ExperimentResult run_threshold_optimality(const Scenario& scenario, std::size_t trials,
                                          std::uint64_t seed) {
  scenario.validate();
  ExperimentResult res;
  res.experiment = "threshold-opt";
  res.x_label = "local Pfa";
  res.y_label = "local Pd";
  res.seed = seed;
  const double sigma = detection_sigma(scenario.detection_snr_db);
  const auto rows = verify_threshold_optimality(sigma, scenario.m, scenario.pfa_grid,
                                                std::max<std::size_t>(trials, 2), seed,
                                                scenario.samples);
  int separated = 0;
  for (const auto& r : rows) {
    const std::size_t n = std::max<std::size_t>(trials, 2);
    res.add(r.target_pfa, "channel_dependent/analytic", r.pd_channel);
    res.add(r.target_pfa, "constant/analytic", r.pd_constant);
    res.add_mc(r.target_pfa, "channel_dependent/mc", r.pd_channel_mc, binomial_ci(r.pd_channel_mc, n), n);
    res.add_mc(r.target_pfa, "constant/mc", r.pd_constant_mc, binomial_ci(r.pd_constant_mc, n), n);
    res.add_mc(r.target_pfa, "gap/mc", r.gap_mc, r.gap_ci95, n);
    separated += r.separated;
  }
  res.note("snr_db", fmt(scenario.detection_snr_db));
  res.note("separated_points", std::to_string(separated));
  return res;
}

ExperimentResult run_centralized_vs_distributed(const Scenario& scenario, int k,
                                                std::size_t trials, std::uint64_t seed) {
  scenario.validate();
  if (scenario.detection_snr_offsets_db && !uniform(*scenario.detection_snr_offsets_db)) {
    throw UnsupportedRegimeError("central-vs-dist: anchors must share one SNR");
  }
  ExperimentResult res;
  res.experiment = "central-vs-dist";
  res.x_label = "fused Pfa";
  res.y_label = "fused Pd";
  res.log_x = true;
  res.seed = seed;
  const int M = static_cast<int>(scenario.anchors.size());
  const FusionRule rule{k, M};
  const auto sig = detection_sigmas(scenario, scenario.detection_snr_db);
  const double sigma = sig.front();
  const double m = scenario.m;
  const SignalTemplate tmpl = SignalTemplate::pseudo_random(scenario.samples);
  // Σ (|h_i|/σ) T_i against ln γ + Σ|h_i|²/(2σ²) is the coherent single-anchor
  // test with envelope √(Σ|h_i|²): Nakagami with shape M·m and σ/√M after
  // normalising the power.
  const double sigma_c = sigma / std::sqrt(static_cast<double>(M));
  const double m_c = m * M;
  std::vector<AnchorObservation> obs;
  if (trials > 0) obs = simulate_network(DetectionRegime::CoherentKnownH, tmpl, sig, m, trials, seed);
  for (double alpha : scenario.pfa_grid) {
    const double p = local_for_fused(alpha, rule);
    const double lg = calibrate_log_gamma_coherent(p, sigma, m);
    const double pd_dist = fused_probability(averaged_pfa_pd_coherent_log(lg, sigma, m).pd, rule);
    const double lgc = calibrate_log_gamma_coherent(alpha, sigma_c, m_c);
    const double pd_cent = averaged_pfa_pd_coherent_log(lgc, sigma_c, m_c).pd;
    res.add(alpha, "distributed/analytic", pd_dist);
    res.add(alpha, "centralized/analytic", pd_cent);
    res.add(alpha, "gap/analytic", pd_cent - pd_dist);
    if (trials == 0) continue;
    const std::vector<double> th(static_cast<std::size_t>(M), lg);
    const FusedCounts dist = fused_mc(obs, DetectionRegime::CoherentKnownH, th, sig, k, trials);
    std::size_t fa = 0, det = 0;
    for (std::size_t t = 0; t < trials; ++t) {
      for (int h = 0; h < 2; ++h) {
        double z = 0.0, power = 0.0;
        for (int i = 0; i < M; ++i) {
          const auto& o = obs[(t * M + i) * 2 + h];
          const double snr_amp = o.envelope / sigma;
          z += snr_amp * o.statistic;
          power += snr_amp * snr_amp;
        }
        const bool one = z > lgc + 0.5 * power;
        (h == 0 ? fa : det) += one;
      }
    }
    const double n = static_cast<double>(trials);
    res.add_mc(alpha, "distributed/mc", dist.pd, binomial_ci(dist.pd, trials), trials);
    res.add_mc(alpha, "distributed/mc_pfa", dist.pfa, binomial_ci(dist.pfa, trials), trials);
    res.add_mc(alpha, "centralized/mc", det / n, binomial_ci(det / n, trials), trials);
    res.add_mc(alpha, "centralized/mc_pfa", fa / n, binomial_ci(fa / n, trials), trials);
  }
  res.note("snr_db", fmt(scenario.detection_snr_db));
  res.note("k", std::to_string(k));
  res.note("centralized_statistic", "sum_i (|h_i|/sigma) T_i");
  return res;
}

std::optional<double> crossing(const ExperimentResult& result, const std::string& series,
                               double level) {
  const auto pts = result.series(series);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].second >= level) {
      if (i == 0) return pts[0].first;
      const auto [x0, y0] = pts[i - 1];
      const auto [x1, y1] = pts[i];
      return x0 + (level - y0) * (x1 - x0) / (y1 - y0);
    }
  }
  return std::nullopt;
}

}  // namespace locfade
