// Built with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "locfade/kernels.hpp"

namespace locfade::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

// Penalty for one grid point over all anchors, for the remainder lanes.
double point_penalty(Penalty penalty, std::span<const double> ranges, const DistanceTable& t,
                     std::span<const double> w, std::size_t g) {
  double s = 0.0;
  for (std::size_t i = 0; i < t.anchors; ++i) {
    const double r = ranges[i] - t.distances[i * t.points + g];
    s += penalty == Penalty::Squares ? w[i] * r * r : std::log1p(w[i] * r * r);
  }
  return s;
}

}  // namespace

double dot(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a.data() + i + 4), _mm256_loadu_pd(b.data() + i + 4),
                           acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i), acc0);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void grid_objective(Penalty penalty, std::span<const double> ranges, const DistanceTable& table,
                    std::span<const double> weights, std::span<double> out) {
  const std::size_t G = table.points;
  const std::size_t M = table.anchors;
  const double* D = table.distances.data();
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t g = 0;
  for (; g + 4 <= G; g += 4) {
    if (penalty == Penalty::Squares) {
      __m256d acc = _mm256_setzero_pd();
      for (std::size_t i = 0; i < M; ++i) {
        const __m256d r = _mm256_sub_pd(_mm256_set1_pd(ranges[i]), _mm256_loadu_pd(D + i * G + g));
        acc = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_set1_pd(weights[i]), r), r, acc);
      }
      _mm256_storeu_pd(out.data() + g, acc);
      continue;
    }
    // ln of a product of up to four factors (1 + r² s) costs one log per
    // lane instead of four; factors stay far from overflow at that depth.
    alignas(32) double lanes[4];
    double sum[4] = {0.0, 0.0, 0.0, 0.0};
    for (std::size_t i0 = 0; i0 < M; i0 += 4) {
      __m256d prod = one;
      const std::size_t i1 = std::min(M, i0 + 4);
      for (std::size_t i = i0; i < i1; ++i) {
        const __m256d r = _mm256_sub_pd(_mm256_set1_pd(ranges[i]), _mm256_loadu_pd(D + i * G + g));
        const __m256d wr = _mm256_mul_pd(_mm256_set1_pd(weights[i]), r);
        prod = _mm256_mul_pd(prod, _mm256_fmadd_pd(wr, r, one));
      }
      _mm256_store_pd(lanes, prod);
      for (int k = 0; k < 4; ++k) sum[k] += std::log(lanes[k]);
    }
    for (int k = 0; k < 4; ++k) out[g + k] = sum[k];
  }
  for (; g < G; ++g) out[g] = point_penalty(penalty, ranges, table, weights, g);
}

}  // namespace locfade::kernels::avx2
