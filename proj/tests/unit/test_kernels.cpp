#include <doctest.h>

#include <cmath>
#include <vector>

#include "locfade/kernels.hpp"
#include "locfade/random.hpp"

using namespace locfade;
namespace k = locfade::kernels;

namespace {
bool close(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); }
}  // namespace

TEST_CASE("dot: scalar and AVX2 agree") {
  Stream s(9, 0);
  for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 8u, 64u, 1001u}) {
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = s.normal();
      b[i] = s.normal();
    }
    const double ref = k::scalar::dot(a, b);
    CHECK(close(k::dot(a, b), ref));
    if (k::avx2_available()) CHECK(close(k::avx2::dot(a, b), ref));
  }
}

TEST_CASE("grid objective: scalar and AVX2 agree") {
  Stream s(9, 1);
  for (std::size_t anchors : {1u, 3u, 4u, 5u, 9u}) {
    for (std::size_t points : {1u, 5u, 8u, 103u}) {
      std::vector<double> dist(anchors * points), ranges(anchors), w(anchors);
      for (auto& d : dist) d = s.uniform(0, 2);
      for (auto& r : ranges) r = s.uniform(0, 2);
      for (auto& x : w) x = s.uniform(0.1, 50);
      const k::DistanceTable t{dist, anchors, points};
      for (auto pen : {k::Penalty::Squares, k::Penalty::LogCauchy}) {
        std::vector<double> ref(points), got(points), fast(points);
        k::scalar::grid_objective(pen, ranges, t, w, ref);
        k::grid_objective(pen, ranges, t, w, got);
        for (std::size_t g = 0; g < points; ++g) CHECK(close(got[g], ref[g]));
        if (k::avx2_available()) {
          k::avx2::grid_objective(pen, ranges, t, w, fast);
          for (std::size_t g = 0; g < points; ++g) CHECK(close(fast[g], ref[g]));
        }
        // reference against the definition
        for (std::size_t g = 0; g < points; ++g) {
          double v = 0;
          for (std::size_t i = 0; i < anchors; ++i) {
            const double r = ranges[i] - dist[i * points + g];
            v += pen == k::Penalty::Squares ? w[i] * r * r : std::log1p(w[i] * r * r);
          }
          CHECK(close(ref[g], v));
        }
      }
    }
  }
}

TEST_CASE("dispatch reports a name") {
  CHECK(!k::isa_name(k::active_isa()).empty());
}
