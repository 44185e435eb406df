#pragma once

#include <span>
#include <vector>

#include "locfade/geometry.hpp"
#include "locfade/numerics.hpp"

namespace locfade {

enum class BoundRegime { Awgn, KnownFading, Modified, Nakagami, NoCsi };
enum class BoundMethod { ClosedForm, Quadrature };

/// Fisher information for one node in 1-D or 2-D, row-major.
struct FisherMatrix {
  std::vector<double> entries;
  int dimension = 1;
  int node_count = 1;

  double at(int r, int c) const { return entries[static_cast<std::size_t>(r * dimension + c)]; }
  /// tr(F⁻¹). Throws SingularGeometryError when cond(F) > 1e12.
  double crlb() const;
};

struct BoundReport {
  double crlb = 0.0;  // m²
  BoundRegime regime = BoundRegime::Awgn;
  BoundMethod method = BoundMethod::ClosedForm;
  double ratio_vs_awgn = 1.0;
};

/// F = Σ w_i u_i u_iᵀ with u_i the unit bearing from node to anchor i
/// (in 1-D u_i² = 1, so F = Σ w_i).
FisherMatrix fisher_from_weights(std::span<const Point> anchors, Point node,
                                 std::span<const double> weights, int dimension);

BoundReport crlb_awgn(std::span<const Point> anchors, Point node, double sigma, double c,
                      int dimension);
BoundReport crlb_known_fading(std::span<const Point> anchors, Point node, double sigma, double c,
                              std::span<const double> envelopes, int dimension = 1);
BoundReport mcrlb(std::span<const Point> anchors, Point node, double sigma, double c,
                  int dimension);

/// ∫ over τ̂ ≥ 0 of (τ̂ − d/c)² / ((τ̂ − d/c)²/(2σ²) + m)^{m+5/2}.
double x_integral(double d, double sigma, double c, double m, const QuadratureSpec& quad = {});
/// X at d = 0: √2 σ³ Γ(3/2) Γ(m+1) / (m^{m+1} Γ(m+5/2)).
double x_integral_leading(double sigma, double m);
/// Two-term upper bound σ³ [X₀/σ³ + a²/(a²/2 + m)^{m+5/2}], a = d/(cσ).
double x_integral_bound(double d, double sigma, double c, double m);

/// ∫ over τ̂ ≥ 0 of (τ̂ − d/c)² (1 + (τ̂ − d/c)²/σ²)^{-3}.
double y_integral(double d, double sigma, double c, const QuadratureSpec& quad = {});
/// σ³ [π/16 + a² (1 + a²)^{-3}], a = d/(cσ).
double y_integral_bound(double d, double sigma, double c);

/// Per-anchor Fisher information (1/m²) of the Nakagami marginal at range d.
/// ClosedForm keeps only the leading term of X. Evaluated with m^{m+5/2}
/// folded into the integrand so large m does not underflow.
double nakagami_information(double d, double sigma, double c, double m, BoundMethod method,
                            const QuadratureSpec& quad = {});
/// Per-anchor Fisher information of the Rayleigh no-CSI marginal.
double nocsi_information(double d, double sigma, double c, BoundMethod method,
                         const QuadratureSpec& quad = {});

/// `sigmas` holds one σ shared by all anchors or one per anchor.
BoundReport crlb_nakagami(std::span<const Point> anchors, Point node,
                          std::span<const double> sigmas, double c, double m, int dimension,
                          BoundMethod method, const QuadratureSpec& quad = {});

/// k(m) = √π Γ(m+5/2) / (Γ(3/2) (m+½)² Γ(m+½)).
double loss_ratio_k(double m);

/// Rayleigh envelope with unknown phase (m = 1 only).
BoundReport crlb_nocsi(std::span<const Point> anchors, Point node, double sigma, double c,
                       double m, int dimension, BoundMethod method,
                       const QuadratureSpec& quad = {});

/// 1-D bound for one of N mutually ranging nodes with M anchors.
/// ratio_vs_awgn is against the non-cooperative AWGN bound c²σ²/M.
BoundReport crlb_cooperative(int M, int N, double sigma, double c, double m, BoundRegime regime);

}  // namespace locfade
