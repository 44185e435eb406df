#include "locfade/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "locfade/errors.hpp"
#include "locfade/kernels.hpp"
#include "locfade/parallel.hpp"
#include "locfade/random.hpp"

namespace locfade {

namespace {

constexpr int kMaxMoves = 100000;
constexpr double kTieRel = 1e-9;

// Per-anchor weight on the squared range residual (ρ − d)², ρ = cτ̂.
double residual_weight(const EstimatorSpec& spec, double sigma) {
  const double c2 = spec.c * spec.c;
  switch (spec.regime) {
    case EstimatorRegime::AwgnLs:
      return 1.0 / c2;
    case EstimatorRegime::NakagamiMl:
      return 1.0 / (2.0 * c2 * sigma * sigma * spec.m);
    case EstimatorRegime::NoCsiMl:
      return 1.0 / (c2 * sigma * sigma);
  }
  return 0.0;
}

std::vector<double> weights_for(const EstimatorSpec& spec, const ToaSample& sample) {
  std::vector<double> w(sample.values.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double s = sample.per_anchor_sigma ? (*sample.per_anchor_sigma)[i] : spec.sigma;
    w[i] = residual_weight(spec, s);
  }
  return w;
}

kernels::Penalty penalty_for(EstimatorRegime r) {
  return r == EstimatorRegime::AwgnLs ? kernels::Penalty::Squares : kernels::Penalty::LogCauchy;
}

double evaluate(Point z, std::span<const double> ranges, std::span<const Point> anchors,
                std::span<const double> w, kernels::Penalty penalty) {
  double s = 0.0;
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    const double r = ranges[i] - distance(anchors[i], z);
    s += penalty == kernels::Penalty::Squares ? w[i] * r * r : std::log1p(w[i] * r * r);
  }
  return s;
}

}  // namespace

void SearchSpec::validate() const {
  if (grid_points_per_axis < 11) throw DomainError("SearchSpec: grid_points_per_axis must be >= 11");
  if (refine_iterations < 0) throw DomainError("SearchSpec: refine_iterations must be >= 0");
  if (refine_tol && !(*refine_tol > 0.0)) throw DomainError("SearchSpec: refine_tol must be positive");
  if (!(inflate >= 0.0)) throw DomainError("SearchSpec: inflate must be non-negative");
  if (bounding_box && !(bounding_box->hi.x > bounding_box->lo.x)) {
    throw DomainError("SearchSpec: bounding box is empty");
  }
}

void EstimatorSpec::validate() const {
  if (!(sigma > 0.0) || !(c > 0.0)) throw DomainError("EstimatorSpec: sigma and c must be positive");
  if (regime == EstimatorRegime::NakagamiMl && !(m >= 0.5)) {
    throw DomainError("EstimatorSpec: m must be >= 0.5");
  }
  if (dimension != 1 && dimension != 2) throw DomainError("EstimatorSpec: dimension must be 1 or 2");
  search.validate();
}

double objective(Point node, const ToaSample& sample, std::span<const Point> anchors,
                 const EstimatorSpec& spec) {
  spec.validate();
  if (sample.values.size() != anchors.size()) throw DomainError("objective: length mismatch");
  std::vector<double> ranges(sample.values.size());
  for (std::size_t i = 0; i < ranges.size(); ++i) ranges[i] = spec.c * sample.values[i];
  const auto w = weights_for(spec, sample);
  return evaluate(node, ranges, anchors, w, penalty_for(spec.regime));
}

LocationEstimator::LocationEstimator(std::vector<Point> anchors, EstimatorSpec spec)
    : anchors_(std::move(anchors)), spec_(std::move(spec)) {
  spec_.validate();
  if (anchors_.size() < static_cast<std::size_t>(spec_.dimension + 1)) {
    throw DomainError("LocationEstimator: need at least dimension + 1 anchors");
  }
  box_ = spec_.search.bounding_box ? *spec_.search.bounding_box
                                   : inflated_hull(anchors_, spec_.search.inflate, spec_.dimension);
  if (spec_.dimension == 2 && !(box_.hi.y > box_.lo.y)) {
    throw DomainError("LocationEstimator: 2-D search box has zero height");
  }
  tol_ = spec_.search.refine_tol ? *spec_.search.refine_tol : 1e-9 * box_.width();
  const int n = spec_.search.grid_points_per_axis;
  nx_ = n;
  ny_ = spec_.dimension == 2 ? n : 1;
  xs_.resize(nx_);
  ys_.resize(ny_);
  for (int j = 0; j < nx_; ++j) xs_[j] = box_.lo.x + (box_.hi.x - box_.lo.x) * j / (n - 1);
  for (int j = 0; j < ny_; ++j) {
    ys_[j] = ny_ == 1 ? box_.lo.y : box_.lo.y + (box_.hi.y - box_.lo.y) * j / (n - 1);
  }
  const std::size_t G = static_cast<std::size_t>(nx_) * ny_;
  table_.resize(anchors_.size() * G);
  for (std::size_t i = 0; i < anchors_.size(); ++i) {
    for (int ix = 0; ix < nx_; ++ix) {
      for (int iy = 0; iy < ny_; ++iy) {
        table_[i * G + static_cast<std::size_t>(ix) * ny_ + iy] =
            distance(anchors_[i], Point{xs_[ix], ys_[iy]});
      }
    }
  }
}

Estimate LocationEstimator::operator()(const ToaSample& sample) const {
  sample.validate();
  const std::size_t M = anchors_.size();
  if (sample.values.size() != M) throw DomainError("estimate_location: length mismatch");
  std::vector<double> ranges(M);
  for (std::size_t i = 0; i < M; ++i) ranges[i] = spec_.c * sample.values[i];
  const auto w = weights_for(spec_, sample);
  const auto penalty = penalty_for(spec_.regime);

  const std::size_t G = static_cast<std::size_t>(nx_) * ny_;
  std::vector<double> f(G);
  kernels::grid_objective(penalty, ranges, kernels::DistanceTable{table_, M, G}, w, f);

  // Cells within a relative 1e-9 of the minimum count as ties; the first in
  // x-major order wins. Ties that are not grid neighbours of it mean the
  // surface has separated minima.
  const double fmin = *std::min_element(f.begin(), f.end());
  const double cut = fmin + kTieRel * std::abs(fmin);
  std::size_t start = G;
  bool multimodal = false;
  for (std::size_t g = 0; g < G; ++g) {
    if (!(f[g] <= cut)) continue;
    if (start == G) {
      start = g;
      continue;
    }
    const long dx = std::labs(static_cast<long>(g / ny_) - static_cast<long>(start / ny_));
    const long dy = std::labs(static_cast<long>(g % ny_) - static_cast<long>(start % ny_));
    if (std::max(dx, dy) > 1) multimodal = true;
  }
  const int ix = static_cast<int>(start / ny_);
  const int iy = static_cast<int>(start % ny_);

  Estimate est;
  est.multimodal = multimodal;
  Point z{xs_[ix], ys_[iy]};
  double fz = evaluate(z, ranges, anchors_, w, penalty);
  if (spec_.search.record_trace) est.trace.push_back(fz);

  // Compass search: poll ±step per axis, take the best strict improvement,
  // halve the step when none improves.
  const double hx = (box_.hi.x - box_.lo.x) / (nx_ - 1);
  const double hy = ny_ > 1 ? (box_.hi.y - box_.lo.y) / (ny_ - 1) : 0.0;
  double sx = hx, sy = hy;
  int halvings = 0, moves = 0, polls = 0;
  auto inside = [&](Point p) {
    return p.x >= box_.lo.x && p.x <= box_.hi.x && p.y >= box_.lo.y && p.y <= box_.hi.y;
  };
  while (halvings < spec_.search.refine_iterations && std::max(sx, sy) >= tol_ && moves < kMaxMoves) {
    ++polls;
    Point best = z;
    double fbest = fz;
    const Point cand[4] = {{z.x - sx, z.y}, {z.x + sx, z.y}, {z.x, z.y - sy}, {z.x, z.y + sy}};
    const int ncand = ny_ > 1 ? 4 : 2;
    for (int k = 0; k < ncand; ++k) {
      if (!inside(cand[k])) continue;
      const double fc = evaluate(cand[k], ranges, anchors_, w, penalty);
      if (fc < fbest) {
        fbest = fc;
        best = cand[k];
      }
    }
    if (fbest < fz) {
      z = best;
      fz = fbest;
      ++moves;
      if (spec_.search.record_trace) est.trace.push_back(fz);
    } else {
      sx *= 0.5;
      sy *= 0.5;
      ++halvings;
    }
  }
  est.position = z;
  est.objective = fz;
  est.iterations = polls;
  const bool edge_x = z.x - box_.lo.x <= hx || box_.hi.x - z.x <= hx;
  const bool edge_y = ny_ > 1 && (z.y - box_.lo.y <= hy || box_.hi.y - z.y <= hy);
  const bool start_edge = ix == 0 || ix == nx_ - 1 || (ny_ > 1 && (iy == 0 || iy == ny_ - 1));
  est.on_boundary = start_edge && (edge_x || edge_y);
  return est;
}

Estimate estimate_location(const ToaSample& sample, std::span<const Point> anchors,
                           const EstimatorSpec& spec) {
  return LocationEstimator(std::vector<Point>(anchors.begin(), anchors.end()), spec)(sample);
}

MseResult evaluate_mse(const EstimatorSpec& spec, std::span<const Point> anchors, Point node,
                       const ToaModel& truth, std::size_t trials, std::uint64_t seed) {
  if (trials < 2) throw DomainError("evaluate_mse: need at least 2 trials");
  truth.validate();
  if (truth.regime == ToaRegime::KnownFading) {
    throw UnsupportedRegimeError("evaluate_mse: draw measurements from a marginal regime");
  }
  const LocationEstimator estimator(std::vector<Point>(anchors.begin(), anchors.end()), spec);
  std::vector<double> err(trials);
  std::vector<unsigned char> boundary(trials), multi(trials);
  parallel_for(trials, [&](std::size_t t) {
    Stream stream(seed, t);
    const ToaSample sample = sample_toa(node, anchors, truth, nullptr, stream);
    const Estimate e = estimator(sample);
    const Point diff = e.position - node;
    err[t] = diff.x * diff.x + diff.y * diff.y;
    boundary[t] = e.on_boundary;
    multi[t] = e.multimodal;
  });
  MseResult r;
  r.trials = trials;
  double sum = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    sum += err[t];
    r.boundary_trials += boundary[t];
    r.multimodal_trials += multi[t];
  }
  r.mse = sum / trials;
  double ss = 0.0;
  for (double e : err) ss += (e - r.mse) * (e - r.mse);
  r.ci95 = 1.96 * std::sqrt(ss / (trials - 1) / trials);
  r.squared_errors = std::move(err);
  return r;
}

}  // namespace locfade
