#pragma once

// Data-parallel inner loops. Each kernel has a portable scalar reference in
// namespace `scalar` and an AVX2/FMA variant in namespace `avx2`; the free
// functions in `kernels` dispatch once per process on the CPU's features.
// Setting LOCFADE_SIMD=scalar forces the reference path.

#include <cstddef>
#include <span>
#include <string_view>

namespace locfade::kernels {

enum class Isa { Scalar, Avx2 };

Isa active_isa();
std::string_view isa_name(Isa isa);
bool avx2_available();

/// Residual penalty summed over anchors at every grid point.
enum class Penalty {
  Squares,     // Σ w_i (ρ_i − D_i)²
  LogCauchy,   // Σ ln(1 + w_i (ρ_i − D_i)²)
};

/// Candidate-to-anchor distances stored anchor-major:
/// distances[i * points + g] is the distance from grid point g to anchor i.
struct DistanceTable {
  std::span<const double> distances;
  std::size_t anchors = 0;
  std::size_t points = 0;
};

double dot(std::span<const double> a, std::span<const double> b);

/// out[g] = penalty of ranges (one per anchor) against grid point g.
void grid_objective(Penalty penalty, std::span<const double> ranges, const DistanceTable& table,
                    std::span<const double> weights, std::span<double> out);

namespace scalar {
double dot(std::span<const double> a, std::span<const double> b);
void grid_objective(Penalty penalty, std::span<const double> ranges, const DistanceTable& table,
                    std::span<const double> weights, std::span<double> out);
}  // namespace scalar

namespace avx2 {
double dot(std::span<const double> a, std::span<const double> b);
void grid_objective(Penalty penalty, std::span<const double> ranges, const DistanceTable& table,
                    std::span<const double> weights, std::span<double> out);
}  // namespace avx2

}  // namespace locfade::kernels
