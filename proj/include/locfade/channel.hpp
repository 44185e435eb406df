#pragma once

#include <cstddef>
#include <vector>

#include "locfade/random.hpp"

namespace locfade {

/// Nakagami-m fading with unit mean power: |h|² ~ Gamma(m, 1/m).
struct FadingParams {
  double m = 1.0;
  double mean_power = 1.0;

  void validate() const;
};

/// Per-anchor envelope |h_i| and phase θ_i.
struct FadingDraw {
  std::vector<double> envelopes;
  std::vector<double> phases;  // [0, 2π)

  std::size_t size() const { return envelopes.size(); }
};

/// Density of the fading power x = |h|².
double gamma_power_pdf(double x, const FadingParams& params);

/// Density of the envelope y = |h|: 2 mᵐ y^{2m-1} e^{-m y²} / Γ(m).
double nakagami_envelope_pdf(double y, const FadingParams& params);

FadingDraw sample_fading(const FadingParams& params, std::size_t count, Stream& stream);

}  // namespace locfade
