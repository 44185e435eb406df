#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "locfade/geometry.hpp"
#include "locfade/toa.hpp"

namespace locfade {

enum class EstimatorRegime {
  AwgnLs,      // Σ (τ̂_i − d_i/c)²
  NakagamiMl,  // Σ ln(1 + (τ̂_i − d_i/c)²/(2σ²m))
  NoCsiMl,     // Σ ln(1 + (τ̂_i − d_i/c)²/σ²)
};

struct SearchSpec {
  std::optional<Box> bounding_box;  // default: anchor hull inflated by `inflate`
  double inflate = 0.25;
  int grid_points_per_axis = 101;
  int refine_iterations = 60;       // step halvings
  std::optional<double> refine_tol; // default 1e-9 × box width
  bool record_trace = false;

  void validate() const;
};

struct EstimatorSpec {
  EstimatorRegime regime = EstimatorRegime::AwgnLs;
  double m = 1.0;
  double sigma = 1.0;
  double c = 1.0;
  int dimension = 2;
  SearchSpec search;

  void validate() const;
};

struct Estimate {
  Point position;
  double objective = 0.0;
  int iterations = 0;
  bool on_boundary = false;  // non-fatal: argmin sits on the box edge
  bool multimodal = false;   // non-fatal: separated grid cells tie
  std::vector<double> trace; // objective after each accepted move, if requested
};

double objective(Point node, const ToaSample& sample, std::span<const Point> anchors,
                 const EstimatorSpec& spec);

/// Grid search plus pattern-search refinement. The candidate-to-anchor
/// distance table is built once and reused for every sample.
class LocationEstimator {
 public:
  LocationEstimator(std::vector<Point> anchors, EstimatorSpec spec);

  Estimate operator()(const ToaSample& sample) const;
  const Box& box() const { return box_; }

 private:
  std::vector<Point> anchors_;
  EstimatorSpec spec_;
  Box box_;
  int nx_ = 0;
  int ny_ = 1;
  double tol_ = 0.0;
  std::vector<double> xs_;
  std::vector<double> ys_;
  std::vector<double> table_;  // anchor-major distances
};

Estimate estimate_location(const ToaSample& sample, std::span<const Point> anchors,
                           const EstimatorSpec& spec);

struct MseResult {
  double mse = 0.0;
  double ci95 = 0.0;
  std::size_t trials = 0;
  std::size_t boundary_trials = 0;
  std::size_t multimodal_trials = 0;
  std::vector<double> squared_errors;  // per trial, in trial order
};

/// Monte Carlo MSE of `spec` on measurements drawn from `truth`. Trial t
/// uses stream (seed, t), so two estimators evaluated with the same seed
/// see identical samples.
MseResult evaluate_mse(const EstimatorSpec& spec, std::span<const Point> anchors, Point node,
                       const ToaModel& truth, std::size_t trials, std::uint64_t seed);

}  // namespace locfade
