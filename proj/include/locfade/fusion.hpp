#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace locfade {

/// Declare the node present when at least k of m_anchors bits are 1.
struct FusionRule {
  int k = 1;
  int m_anchors = 1;

  void validate() const;
};

/// Binomial upper tail Σ_{j≥k} C(M, j) p^j (1 − p)^{M−j}.
double fused_probability(double p_local, const FusionRule& rule);

/// Anchors with their own local probabilities (Poisson-binomial tail).
/// Extension beyond the identical-anchor model; off unless asked for.
double fused_probability_heterogeneous(std::span<const double> p_local, int k);

/// Local probability giving fused probability `target` under `rule`.
double local_for_fused(double target, const FusionRule& rule);

/// One point of a local ROC indexed by the threshold that produced it.
struct LocalRocSample {
  double gamma = 0.0;
  double pfa = 0.0;
  double pd = 0.0;
};

struct KOption {
  int k = 0;
  bool feasible = false;
  double local_pfa = 0.0;
  double local_pd = 0.0;
  double pd_total = 0.0;
  std::string note;  // why an infeasible k was skipped
};

struct KChoice {
  int k_star = 0;
  double pd_total = 0.0;
  std::vector<KOption> options;
};

/// For every k calibrate the local operating point so the fused pfa is
/// alpha, then keep the k with the largest fused pd (smallest k on ties).
/// `pd_of_pfa` maps a local pfa to the local pd, or throws
/// InfeasibleError when that pfa is out of reach.
KChoice choose_k(const std::function<double(double)>& pd_of_pfa, double alpha, int M);

/// Same, from a sampled local ROC (linear interpolation of pd in ln pfa).
KChoice choose_k(std::span<const LocalRocSample> roc, double alpha, int M);

}  // namespace locfade
