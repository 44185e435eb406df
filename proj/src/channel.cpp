#include "locfade/channel.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "locfade/errors.hpp"
#include "locfade/numerics.hpp"

namespace locfade {

void FadingParams::validate() const {
  if (!(m >= 0.5) || !std::isfinite(m)) {
    throw DomainError("FadingParams: m must be finite and >= 0.5");
  }
  if (mean_power != 1.0) {
    throw DomainError("FadingParams: mean_power is fixed at 1");
  }
}

double gamma_power_pdf(double x, const FadingParams& params) {
  params.validate();
  if (x < 0.0) throw DomainError("gamma_power_pdf: x must be non-negative");
  const double m = params.m;
  if (x == 0.0) {
    if (m < 1.0) return std::numeric_limits<double>::infinity();
    if (m > 1.0) return 0.0;
    return 1.0;
  }
  return std::exp(m * std::log(m) + (m - 1.0) * std::log(x) - m * x - ln_gamma(m));
}

double nakagami_envelope_pdf(double y, const FadingParams& params) {
  params.validate();
  if (y < 0.0) throw DomainError("nakagami_envelope_pdf: y must be non-negative");
  const double m = params.m;
  if (y == 0.0) {
    return m == 0.5 ? 2.0 * std::sqrt(0.5 / std::numbers::pi) : 0.0;
  }
  return 2.0 * std::exp(m * std::log(m) + (2.0 * m - 1.0) * std::log(y) - m * y * y - ln_gamma(m));
}

FadingDraw sample_fading(const FadingParams& params, std::size_t count, Stream& stream) {
  params.validate();
  if (count < 1) throw DomainError("sample_fading: count must be >= 1");
  FadingDraw draw;
  draw.envelopes.resize(count);
  draw.phases.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    draw.envelopes[i] = std::sqrt(stream.gamma(params.m, 1.0 / params.m));
    double theta = stream.uniform(0.0, 2.0 * std::numbers::pi);
    if (theta >= 2.0 * std::numbers::pi) theta = 0.0;  // rounding can land on the open end
    draw.phases[i] = theta;
  }
  return draw;
}

}  // namespace locfade
