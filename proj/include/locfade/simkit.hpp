#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "locfade/detect.hpp"
#include "locfade/estimate.hpp"
#include "locfade/geometry.hpp"

namespace locfade {

/// Geometry and channel for every experiment. σ comes from the SNR grid:
/// SNR = 1/(c²σ²) for estimation and SNR = 1/σ² for detection.
struct Scenario {
  std::vector<Point> anchors{{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}};
  std::vector<Point> nodes{{0.5, 0.5}};
  double c = 3e8;
  double m = 1.0;
  int dimension = 2;
  std::optional<std::vector<double>> sigma_scale;  // per-anchor TOA σ multipliers

  std::vector<double> snr_db_grid{-20, -15, -10, -5, 0, 5, 10, 15, 20, 25, 30};
  std::vector<double> m_grid{0.5, 0.75, 1, 1.5, 2, 3, 4, 6, 8, 16, 32, 64, 128, 256, 1000};

  std::vector<EstimatorRegime> estimators{EstimatorRegime::NakagamiMl, EstimatorRegime::AwgnLs};
  int grid_points_per_axis = 101;

  std::vector<DetectionRegime> detectors{DetectionRegime::CoherentKnownH,
                                         DetectionRegime::RayleighMarginal,
                                         DetectionRegime::NoCsiQuadratic};
  double detection_snr_db = 15.0;
  std::vector<double> detection_snr_grid{0, 2, 4, 6, 8, 10, 12, 14, 16, 18, 20, 22, 24, 26, 28, 30};
  int samples = 64;
  std::vector<int> k_values{1, 2, 3, 4};
  int k = 1;                      // pd-vs-snr
  std::optional<int> central_k;   // central-vs-dist; unset means K = M
  double pfa_total = 0.1;
  double pd_level = 0.85;
  std::vector<double> pfa_grid{1e-4, 2e-4, 5e-4, 1e-3, 2e-3, 5e-3, 0.01, 0.02, 0.05, 0.1, 0.2, 0.3, 0.5};
  std::vector<double> alpha_grid{1e-4, 1e-3, 1e-2, 0.05, 0.1, 0.2, 0.3, 0.5};
  // Per-anchor detection SNR offsets. Anchors then differ in local pd and
  // fusion switches to the Poisson-binomial tail; needs heterogeneous_fusion.
  std::optional<std::vector<double>> detection_snr_offsets_db;
  bool heterogeneous_fusion = false;

  std::size_t trials = 10000;

  void validate() const;
  double estimation_sigma(double snr_db) const;
  std::vector<double> anchor_sigmas(double sigma) const;
};

double detection_sigma(double snr_db);

/// Per-anchor detection σ at a nominal SNR, honouring the offsets.
std::vector<double> detection_sigmas(const Scenario& scenario, double snr_db);

struct ResultRow {
  double x = 0.0;
  std::string series;
  double y = 0.0;
  std::optional<double> ci95;  // Monte Carlo rows only
  std::size_t trials = 0;
};

struct ExperimentResult {
  std::string experiment;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  std::vector<ResultRow> rows;
  std::uint64_t seed = 0;
  std::string config_hash;
  std::vector<std::pair<std::string, std::string>> notes;

  void add(double x, std::string series, double y) { rows.push_back({x, std::move(series), y, {}, 0}); }
  void add_mc(double x, std::string series, double y, double ci, std::size_t n) {
    rows.push_back({x, std::move(series), y, ci, n});
  }
  void note(std::string key, std::string value) { notes.emplace_back(std::move(key), std::move(value)); }
  /// Rows ordered by (series, x), the order written to disk.
  std::vector<ResultRow> sorted_rows() const;
  /// y values of one series ordered by x.
  std::vector<std::pair<double, double>> series(const std::string& name) const;
};

std::string regime_name(DetectionRegime r);
std::string regime_name(EstimatorRegime r);

ExperimentResult run_crlb_sweep(const Scenario& scenario);
ExperimentResult run_k_ratio_curve(const std::vector<double>& m_grid);
ExperimentResult run_mle_comparison(const Scenario& scenario, std::size_t trials, std::uint64_t seed);
ExperimentResult run_roc(const Scenario& scenario, const std::vector<DetectionRegime>& regimes,
                         const std::vector<int>& k_values, std::size_t trials, std::uint64_t seed);
ExperimentResult run_pd_vs_snr(const Scenario& scenario, double pfa_total, int k,
                               std::size_t trials, std::uint64_t seed);
ExperimentResult run_k_sweep(const Scenario& scenario);
ExperimentResult run_threshold_optimality(const Scenario& scenario, std::size_t trials,
                                          std::uint64_t seed);
ExperimentResult run_centralized_vs_distributed(const Scenario& scenario, int k,
                                                std::size_t trials, std::uint64_t seed);

/// x where a series increasing in x first reaches `level` (linear
/// interpolation), or nullopt when it never does.
std::optional<double> crossing(const ExperimentResult& result, const std::string& series,
                               double level);

}  // namespace locfade
