#pragma once

#include <functional>

namespace locfade {

/// Tolerances and limits shared by every adaptive integral in the library.
struct QuadratureSpec {
  double abs_tol = 1e-11;
  double rel_tol = 1e-10;
  int max_subdivisions = 4000;
  // Semi-infinite integrands that stop being finite beyond
  // truncation_radius * scale are treated as zero there.
  double truncation_radius = 1e6;

  void validate() const;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int subdivisions = 0;
};

using RealFunction = std::function<double(double)>;

/// Gaussian tail probability P[N(0,1) > x].
double q_function(double x);

/// Inverse of q_function on (0, 1). Throws DomainError outside.
double q_inverse(double p);

/// Standard normal density.
double normal_pdf(double x);

/// ln Γ(x) for x > 0.
double ln_gamma(double x);

/// Gauss hypergeometric ₂F₁(a, b; c; z) for 0 <= z < 1 by its Pochhammer
/// series. Terminates exactly when a or b is a non-positive integer.
/// Throws ConvergenceError when z >= 1 or the tail bound is not met within
/// `max_terms`.
double hyp2f1(double a, double b, double c, double z, double tol = 1e-15,
              int max_terms = 100000);

/// Adaptive Gauss-Kronrod (7/15) quadrature on the finite interval [a, b].
QuadratureResult integrate(const RealFunction& f, double a, double b,
                           const QuadratureSpec& spec = {});

/// ∫₀^∞ f(x) dx after mapping x = scale * t / (1 - t), t in [0, 1).
/// `scale` should be the width of the region where f carries its mass.
QuadratureResult integrate_semi_infinite(const RealFunction& f,
                                         const QuadratureSpec& spec = {},
                                         double scale = 1.0);

}  // namespace locfade
