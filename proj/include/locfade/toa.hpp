#pragma once

#include <optional>
#include <span>
#include <vector>

#include "locfade/channel.hpp"
#include "locfade/geometry.hpp"
#include "locfade/random.hpp"

namespace locfade {

enum class ToaRegime {
  Awgn,              // τ̂ ~ N(d/c, σ²)
  KnownFading,       // τ̂ | h ~ N(d/c, σ²/|h|²)
  NakagamiMarginal,  // |h| Nakagami-m, averaged out
  NoCsiMarginal,     // variance σ²/(|h|²(1 − sin 2θ)), |h| and θ averaged out
  NoCsiAltBranch,    // one branch of the two-correlator receiver: σ²/(|h|² cos²θ)
};

struct ToaModel {
  ToaRegime regime = ToaRegime::Awgn;
  double sigma = 1.0;  // seconds
  double c = 1.0;      // metres per second
  double m = 1.0;

  void validate() const;
  ToaModel with_sigma(double s) const {
    ToaModel copy = *this;
    copy.sigma = s;
    return copy;
  }
};

struct ToaSample {
  std::vector<double> values;  // seconds
  std::optional<std::vector<double>> per_anchor_sigma;

  void validate() const;
};

/// Conditional variance of τ̂ given the channel. Throws
/// DegenerateChannelError when it is infinite.
double conditional_variance(const ToaModel& model, double envelope, std::optional<double> phase);

double pdf_conditional(double tau, double d, const ToaModel& model, double envelope,
                       std::optional<double> phase = std::nullopt);

/// ln of the channel-averaged density. Awgn is accepted as its own
/// marginal; KnownFading has none and throws UnsupportedRegimeError.
double log_pdf_marginal(double tau, double d, const ToaModel& model);
double pdf_marginal(double tau, double d, const ToaModel& model);

/// ₂F₁(1, 1 − m; 3/2; z) written in terms of ε = 1 − z so that the
/// far tail does not round z to 1. Returns the natural log.
double log_nocsi_hypergeometric(double m, double eps);

double log_likelihood(const ToaSample& sample, Point node, std::span<const Point> anchors,
                      const ToaModel& model);

/// Draws one TOA per anchor. Conditional regimes need `draw`; marginal
/// regimes generate their own channel when it is absent.
ToaSample sample_toa(Point node, std::span<const Point> anchors, const ToaModel& model,
                     const FadingDraw* draw, Stream& stream,
                     std::span<const double> per_anchor_sigma = {});

/// Per-branch to combined-scheme conditional variance ratio of the
/// two-correlator receiver.
double alt_branch_variance_ratio(const ToaModel& model);

}  // namespace locfade
