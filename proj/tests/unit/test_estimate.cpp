#include <doctest.h>

#include <cmath>
#include <vector>

#include "locfade/errors.hpp"
#include "locfade/estimate.hpp"
#include "locfade/toa.hpp"

using namespace locfade;

namespace {
const std::vector<Point> kSquare{{0, 0}, {1, 0}, {1, 1}, {0, 1}};

ToaSample exact(Point z, const std::vector<Point>& anchors, double c) {
  ToaSample s;
  for (const auto& a : anchors) s.values.push_back(distance(a, z) / c);
  return s;
}

EstimatorSpec spec(EstimatorRegime r, double sigma, double c = 1.0, double m = 1.0) {
  EstimatorSpec e;
  e.regime = r;
  e.sigma = sigma;
  e.c = c;
  e.m = m;
  return e;
}
}  // namespace

TEST_CASE("objective zero at exact ranges") {
  const Point z{0.3, 0.7};
  const auto s = exact(z, kSquare, 1.0);
  for (auto r : {EstimatorRegime::AwgnLs, EstimatorRegime::NakagamiMl, EstimatorRegime::NoCsiMl}) {
    CHECK(std::abs(objective(z, s, kSquare, spec(r, 0.1))) < 1e-24);
    CHECK(objective({0.5, 0.5}, s, kSquare, spec(r, 0.1)) > 0.0);
  }
}

TEST_CASE("no-CSI objective is the Nakagami objective with 2σ²m replaced by σ²") {
  ToaSample s{{0.1, 0.9, 1.3, 0.8}, {}};
  const double sigma = 0.3;
  for (Point z : {Point{0.2, 0.2}, Point{0.5, 0.9}}) {
    const double a = objective(z, s, kSquare, spec(EstimatorRegime::NoCsiMl, sigma));
    const double b = objective(z, s, kSquare, spec(EstimatorRegime::NakagamiMl, sigma / std::sqrt(2.0), 1.0, 1.0));
    const double h = objective(z, s, kSquare, spec(EstimatorRegime::NakagamiMl, sigma, 1.0, 0.5));
    CHECK(std::abs(a - b) < 1e-13);
    CHECK(std::abs(a - h) < 1e-13);
  }
}

TEST_CASE("large m log penalty approaches scaled squares") {
  ToaSample s{{0.71, 0.69, 0.72, 0.70}, {}};
  const double sigma = 0.05, m = 1e6;
  const Point z{0.5, 0.5};
  const double nak = objective(z, s, kSquare, spec(EstimatorRegime::NakagamiMl, sigma, 1.0, m));
  const double ls = objective(z, s, kSquare, spec(EstimatorRegime::AwgnLs, sigma));
  CHECK(std::abs(nak / (ls / (2 * sigma * sigma * m)) - 1.0) < 1e-4);
}

TEST_CASE("noiseless 2-D estimate") {
  const Point z{0.37, 0.61};
  for (auto r : {EstimatorRegime::AwgnLs, EstimatorRegime::NakagamiMl, EstimatorRegime::NoCsiMl}) {
    const auto e = estimate_location(exact(z, kSquare, 3e8), kSquare, spec(r, 1e-10, 3e8));
    CHECK(distance(e.position, z) < 1e-6 * 1.5);
    CHECK_FALSE(e.on_boundary);
  }
}

TEST_CASE("1-D least squares matches the closed form") {
  const std::vector<Point> a{{0, 0}, {4, 0}};
  ToaSample s{{1.3, 2.5}, {}};
  // node between anchors: residuals (x − 1.3) and (4 − x − 2.5) → x = (1.3 + 1.5)/2
  auto e = spec(EstimatorRegime::AwgnLs, 1.0);
  e.dimension = 1;
  const auto est = estimate_location(s, a, e);
  CHECK(std::abs(est.position.x - 1.4) < 1e-8);
}

TEST_CASE("symmetric tie is flagged and the first cell wins") {
  // Two anchors on the x axis, 2-D: mirror images about y = 0 tie exactly.
  const std::vector<Point> a{{0, 0}, {2, 0}, {1, 0}};
  ToaSample s{{1.5, 1.5, 1.118033988749895}, {}};
  auto e = spec(EstimatorRegime::AwgnLs, 1.0);
  e.search.bounding_box = Box{{-1, -1.5}, {3, 1.5}};
  const auto est = estimate_location(s, a, e);
  CHECK(est.multimodal);
  CHECK(est.position.y < 0.0);
}

TEST_CASE("refinement is monotone") {
  auto e = spec(EstimatorRegime::NakagamiMl, 0.05);
  e.search.record_trace = true;
  ToaSample s{{0.8, 0.6, 0.75, 0.5}, {}};
  const auto est = estimate_location(s, kSquare, e);
  REQUIRE(!est.trace.empty());
  for (std::size_t i = 1; i < est.trace.size(); ++i) CHECK(est.trace[i] <= est.trace[i - 1]);
}

TEST_CASE("translation equivariance") {
  ToaSample s{{0.8, 0.6, 0.75, 0.5}, {}};
  auto e = spec(EstimatorRegime::NakagamiMl, 0.05);
  const auto a = estimate_location(s, kSquare, e);
  std::vector<Point> moved;
  const Point v{10.0, -3.0};
  for (const auto& p : kSquare) moved.push_back(p + v);
  const auto b = estimate_location(s, moved, e);
  CHECK(distance(b.position - v, a.position) < 1e-6);
}

TEST_CASE("evaluate_mse") {
  const double c = 3e8, sigma = 1.0 / (c * 100);
  const ToaModel truth{ToaRegime::Awgn, sigma, c, 1.0};
  const auto r = evaluate_mse(spec(EstimatorRegime::AwgnLs, sigma, c), kSquare, {0.5, 0.5}, truth, 500, 3);
  CHECK(r.trials == 500);
  CHECK(r.squared_errors.size() == 500);
  CHECK(r.mse > 0.5e-4);
  CHECK(r.mse < 2e-4);
  const auto again = evaluate_mse(spec(EstimatorRegime::AwgnLs, sigma, c), kSquare, {0.5, 0.5}, truth, 500, 3);
  CHECK(again.mse == r.mse);
  const ToaModel tiny{ToaRegime::Awgn, 1e-15, c, 1.0};
  const auto z = evaluate_mse(spec(EstimatorRegime::AwgnLs, 1e-15, c), kSquare, {0.5, 0.5}, tiny, 20, 3);
  CHECK(z.mse < 1e-10);
  CHECK_THROWS(evaluate_mse(spec(EstimatorRegime::AwgnLs, sigma, c), kSquare, {0.5, 0.5}, truth, 1, 3));
}
