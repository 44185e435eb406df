#include <cmath>

#include "locfade/kernels.hpp"

namespace locfade::kernels::scalar {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void grid_objective(Penalty penalty, std::span<const double> ranges, const DistanceTable& table,
                    std::span<const double> weights, std::span<double> out) {
  const std::size_t G = table.points;
  for (std::size_t g = 0; g < G; ++g) out[g] = 0.0;
  for (std::size_t i = 0; i < table.anchors; ++i) {
    const double* row = table.distances.data() + i * G;
    const double rho = ranges[i];
    const double w = weights[i];
    if (penalty == Penalty::Squares) {
      for (std::size_t g = 0; g < G; ++g) {
        const double r = rho - row[g];
        out[g] += w * r * r;
      }
    } else {
      for (std::size_t g = 0; g < G; ++g) {
        const double r = rho - row[g];
        out[g] += std::log1p(w * r * r);
      }
    }
  }
}

}  // namespace locfade::kernels::scalar
