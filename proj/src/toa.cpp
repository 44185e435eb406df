#include "locfade/toa.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "locfade/errors.hpp"
#include "locfade/numerics.hpp"

namespace locfade {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPhaseFloor = 1e-12;

bool needs_phase(ToaRegime r) { return r == ToaRegime::NoCsiMarginal || r == ToaRegime::NoCsiAltBranch; }

double phase_factor(ToaRegime r, double theta) {
  if (r == ToaRegime::NoCsiMarginal) return 1.0 - std::sin(2.0 * theta);
  const double c = std::cos(theta);
  return c * c;
}

double log_gauss(double u, double var) { return -0.5 * std::log(2.0 * kPi * var) - 0.5 * u * u / var; }

double log_nakagami_marginal(double u, double sigma, double m) {
  const double s2 = sigma * sigma;
  return m * std::log(m) + ln_gamma(m + 0.5) - 0.5 * std::log(2.0 * kPi * s2) - ln_gamma(m) -
         (m + 0.5) * std::log(u * u / (2.0 * s2) + m);
}

double log_nocsi_marginal(double u, double sigma, double m) {
  const double ms2 = m * sigma * sigma;
  const double denom = u * u + ms2;
  const double eps = ms2 / denom;
  return std::log(2.0 * sigma * std::sqrt(m)) + ln_gamma(m + 0.5) - ln_gamma(m) -
         1.5 * std::log(kPi) - std::log(denom) + log_nocsi_hypergeometric(m, eps);
}

}  // namespace

void ToaModel::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("ToaModel: sigma must be positive");
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("ToaModel: c must be positive");
  if (regime != ToaRegime::Awgn && regime != ToaRegime::KnownFading) {
    if (!(m >= 0.5) || !std::isfinite(m)) throw DomainError("ToaModel: m must be >= 0.5");
  }
}

void ToaSample::validate() const {
  for (double v : values) {
    if (!std::isfinite(v)) throw DomainError("ToaSample: non-finite measurement");
  }
  if (per_anchor_sigma) {
    if (per_anchor_sigma->size() != values.size()) {
      throw DomainError("ToaSample: per_anchor_sigma length mismatch");
    }
    for (double s : *per_anchor_sigma) {
      if (!(s > 0.0)) throw DomainError("ToaSample: per_anchor_sigma must be positive");
    }
  }
}

double conditional_variance(const ToaModel& model, double envelope, std::optional<double> phase) {
  model.validate();
  const double s2 = model.sigma * model.sigma;
  if (model.regime == ToaRegime::Awgn) return s2;
  if (!(envelope > 0.0)) throw DegenerateChannelError("conditional_variance: zero envelope");
  if (!needs_phase(model.regime)) return s2 / (envelope * envelope);
  if (!phase) throw DomainError("conditional_variance: phase required for no-CSI regimes");
  const double f = phase_factor(model.regime, *phase);
  if (!(f > 0.0)) throw DegenerateChannelError("conditional_variance: phase nulls the estimate");
  return s2 / (envelope * envelope * f);
}

double pdf_conditional(double tau, double d, const ToaModel& model, double envelope,
                       std::optional<double> phase) {
  const double var = conditional_variance(model, envelope, phase);
  return std::exp(log_gauss(tau - d / model.c, var));
}

double log_nocsi_hypergeometric(double m, double eps) {
  if (!(eps > 0.0 && eps <= 1.0)) throw DomainError("log_nocsi_hypergeometric: eps outside (0, 1]");
  const double z = 1.0 - eps;
  const bool terminating = std::floor(m) == m && m <= 8.0;
  if (z <= 0.5 || terminating) {
    return std::log(hyp2f1(1.0, 1.0 - m, 1.5, z));
  }
  // Euler form ∫₀¹ (ε + z v²)^{m-1} dv with v = a sinh w, a = √(ε/z):
  //   ε^{m-1} a ∫₀^W cosh^{2m-1} w dw,  W = asinh(1/a).
  // Integrate from the top end with cosh^{2m-1}(W) factored out.
  const double a = std::sqrt(eps / z);
  const double W = std::asinh(1.0 / a);
  const double p = 2.0 * m - 1.0;
  const double lcW = std::log(std::cosh(W));
  QuadratureSpec spec;
  spec.abs_tol = 1e-300;
  spec.rel_tol = 1e-13;
  auto f = [&](double t) { return std::exp(p * (std::log(std::cosh(W - t)) - lcW)); };
  const double I = integrate(f, 0.0, W, spec).value;
  return (m - 1.0) * std::log(eps) + std::log(a) + p * lcW + std::log(I);
}

double log_pdf_marginal(double tau, double d, const ToaModel& model) {
  model.validate();
  const double u = tau - d / model.c;
  switch (model.regime) {
    case ToaRegime::Awgn:
      return log_gauss(u, model.sigma * model.sigma);
    case ToaRegime::NakagamiMarginal:
      return log_nakagami_marginal(u, model.sigma, model.m);
    case ToaRegime::NoCsiMarginal:
      return log_nocsi_marginal(u, model.sigma, model.m);
    case ToaRegime::NoCsiAltBranch:
      // cos²θ has half the mean of 1 − sin 2θ: same law with σ² doubled
      return log_nocsi_marginal(u, std::numbers::sqrt2 * model.sigma, model.m);
    case ToaRegime::KnownFading:
      break;
  }
  throw UnsupportedRegimeError("pdf_marginal: KnownFading has no marginal density");
}

double pdf_marginal(double tau, double d, const ToaModel& model) {
  return std::exp(log_pdf_marginal(tau, d, model));
}

double log_likelihood(const ToaSample& sample, Point node, std::span<const Point> anchors,
                      const ToaModel& model) {
  sample.validate();
  if (sample.values.size() != anchors.size()) {
    throw DomainError("log_likelihood: sample and anchor counts differ");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    const ToaModel mi = sample.per_anchor_sigma ? model.with_sigma((*sample.per_anchor_sigma)[i]) : model;
    total += log_pdf_marginal(sample.values[i], distance(anchors[i], node), mi);
  }
  return total;
}

ToaSample sample_toa(Point node, std::span<const Point> anchors, const ToaModel& model,
                     const FadingDraw* draw, Stream& stream,
                     std::span<const double> per_anchor_sigma) {
  model.validate();
  const std::size_t M = anchors.size();
  if (!per_anchor_sigma.empty() && per_anchor_sigma.size() != M) {
    throw DomainError("sample_toa: per_anchor_sigma length mismatch");
  }
  if (draw != nullptr && draw->size() != M) throw DomainError("sample_toa: draw length mismatch");
  if (model.regime == ToaRegime::KnownFading && draw == nullptr) {
    throw DomainError("sample_toa: KnownFading needs a fading draw");
  }
  FadingDraw own;
  if (draw == nullptr && model.regime != ToaRegime::Awgn) {
    own = sample_fading(FadingParams{model.m}, M, stream);
    draw = &own;
  }
  ToaSample out;
  out.values.resize(M);
  for (std::size_t i = 0; i < M; ++i) {
    const double sigma = per_anchor_sigma.empty() ? model.sigma : per_anchor_sigma[i];
    double std_dev = sigma;
    if (model.regime != ToaRegime::Awgn) {
      const double h = draw->envelopes[i];
      if (!(h > 0.0)) throw DegenerateChannelError("sample_toa: zero envelope");
      double factor = 1.0;
      if (needs_phase(model.regime)) {
        double theta = draw->phases[i];
        // the excluded phases form a null set; redrawing keeps the marginal
        while ((factor = phase_factor(model.regime, theta)) < kPhaseFloor) {
          theta = stream.uniform(0.0, 2.0 * kPi);
        }
      }
      std_dev = sigma / (h * std::sqrt(factor));
    }
    out.values[i] = distance(anchors[i], node) / model.c + std_dev * stream.normal();
  }
  if (!per_anchor_sigma.empty()) {
    out.per_anchor_sigma.emplace(per_anchor_sigma.begin(), per_anchor_sigma.end());
  }
  return out;
}

double alt_branch_variance_ratio(const ToaModel& model) {
  if (model.regime != ToaRegime::NoCsiAltBranch) {
    throw UnsupportedRegimeError("alt_branch_variance_ratio: regime must be NoCsiAltBranch");
  }
  // E[cos²θ] = ½ against E[1 − sin 2θ] = 1 for uniform θ.
  return 2.0;
}

}  // namespace locfade
