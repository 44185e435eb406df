#include <cstdlib>
#include <cstring>

#include "locfade/kernels.hpp"

namespace locfade::kernels {

#ifndef LOCFADE_HAVE_AVX2_TU
namespace avx2 {
double dot(std::span<const double> a, std::span<const double> b) { return scalar::dot(a, b); }
void grid_objective(Penalty penalty, std::span<const double> ranges, const DistanceTable& table,
                    std::span<const double> weights, std::span<double> out) {
  scalar::grid_objective(penalty, ranges, table, weights, out);
}
}  // namespace avx2
#endif

bool avx2_available() {
#if defined(LOCFADE_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa active_isa() {
  static const Isa isa = [] {
    const char* env = std::getenv("LOCFADE_SIMD");
    if (env != nullptr && std::strcmp(env, "scalar") == 0) return Isa::Scalar;
    return avx2_available() ? Isa::Avx2 : Isa::Scalar;
  }();
  return isa;
}

std::string_view isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

double dot(std::span<const double> a, std::span<const double> b) {
  return active_isa() == Isa::Avx2 ? avx2::dot(a, b) : scalar::dot(a, b);
}

void grid_objective(Penalty penalty, std::span<const double> ranges, const DistanceTable& table,
                    std::span<const double> weights, std::span<double> out) {
  if (active_isa() == Isa::Avx2) {
    avx2::grid_objective(penalty, ranges, table, weights, out);
  } else {
    scalar::grid_objective(penalty, ranges, table, weights, out);
  }
}

}  // namespace locfade::kernels
