#include "locfade/fusion.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/tools/roots.hpp>

#include "locfade/errors.hpp"

namespace locfade {

namespace {

double ipow(double x, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

double choose(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

}  // namespace

void FusionRule::validate() const {
  if (m_anchors < 1 || k < 1 || k > m_anchors) {
    throw DomainError("FusionRule: need 1 <= k <= m_anchors");
  }
}

double fused_probability(double p, const FusionRule& rule) {
  rule.validate();
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("fused_probability: p must lie in [0, 1]");
  const int M = rule.m_anchors;
  double total = 0.0;
  for (int j = rule.k; j <= M; ++j) total += choose(M, j) * ipow(p, j) * ipow(1.0 - p, M - j);
  return std::min(1.0, total);
}

double fused_probability_heterogeneous(std::span<const double> p, int k) {
  const int M = static_cast<int>(p.size());
  FusionRule{k, M}.validate();
  // dist[j] = P(exactly j ones among the anchors seen so far)
  std::vector<double> dist(static_cast<std::size_t>(M) + 1, 0.0);
  dist[0] = 1.0;
  for (int i = 0; i < M; ++i) {
    const double q = p[static_cast<std::size_t>(i)];
    if (!(q >= 0.0 && q <= 1.0)) throw DomainError("fused_probability: p must lie in [0, 1]");
    for (int j = i + 1; j >= 1; --j) dist[j] = dist[j] * (1.0 - q) + dist[j - 1] * q;
    dist[0] *= 1.0 - q;
  }
  double total = 0.0;
  for (int j = k; j <= M; ++j) total += dist[j];
  return std::min(1.0, total);
}

double local_for_fused(double target, const FusionRule& rule) {
  rule.validate();
  if (!(target > 0.0 && target < 1.0)) throw DomainError("local_for_fused: target must lie in (0, 1)");
  auto f = [&](double p) { return fused_probability(p, rule) - target; };
  boost::uintmax_t iters = 300;
  auto r = boost::math::tools::toms748_solve(f, 0.0, 1.0, -target, 1.0 - target,
                                             boost::math::tools::eps_tolerance<double>(50), iters);
  return 0.5 * (r.first + r.second);
}

KChoice choose_k(const std::function<double(double)>& pd_of_pfa, double alpha, int M) {
  if (M < 1) throw DomainError("choose_k: M must be >= 1");
  KChoice out;
  for (int k = 1; k <= M; ++k) {
    KOption opt;
    opt.k = k;
    const FusionRule rule{k, M};
    try {
      opt.local_pfa = local_for_fused(alpha, rule);
      opt.local_pd = pd_of_pfa(opt.local_pfa);
      opt.pd_total = fused_probability(opt.local_pd, rule);
      opt.feasible = true;
    } catch (const InfeasibleError& e) {
      opt.note = e.what();
    }
    if (opt.feasible && (out.k_star == 0 || opt.pd_total > out.pd_total + 1e-12)) {
      out.k_star = k;
      out.pd_total = opt.pd_total;
    }
    out.options.push_back(opt);
  }
  if (out.k_star == 0) throw InfeasibleError("choose_k: no k reaches the requested fused pfa");
  return out;
}

KChoice choose_k(std::span<const LocalRocSample> roc, double alpha, int M) {
  std::vector<LocalRocSample> pts(roc.begin(), roc.end());
  std::sort(pts.begin(), pts.end(),
            [](const LocalRocSample& a, const LocalRocSample& b) { return a.pfa < b.pfa; });
  pts.erase(std::remove_if(pts.begin(), pts.end(), [](const LocalRocSample& s) { return !(s.pfa > 0.0); }),
            pts.end());
  if (pts.empty()) throw DomainError("choose_k: local ROC has no points with pfa > 0");
  auto interp = [&](double p) {
    if (p < pts.front().pfa || p > pts.back().pfa) {
      throw InfeasibleError("local pfa " + std::to_string(p) + " outside the sampled ROC");
    }
    auto hi = std::lower_bound(pts.begin(), pts.end(), p,
                               [](const LocalRocSample& s, double v) { return s.pfa < v; });
    if (hi == pts.begin()) return hi->pd;
    auto lo = hi - 1;
    if (hi->pfa == p) return hi->pd;
    const double t = (std::log(p) - std::log(lo->pfa)) / (std::log(hi->pfa) - std::log(lo->pfa));
    return lo->pd + t * (hi->pd - lo->pd);
  };
  return choose_k(interp, alpha, M);
}

}  // namespace locfade
