#include <doctest.h>

#include <cmath>
#include <vector>

#include "locfade/errors.hpp"
#include "locfade/fusion.hpp"

using namespace locfade;

TEST_CASE("binomial tail") {
  CHECK(fused_probability(0.5, {2, 4}) == 11.0 / 16.0);
  for (double p : {0.01, 0.3, 0.77}) {
    CHECK(std::abs(fused_probability(p, {1, 5}) - (1 - std::pow(1 - p, 5))) < 1e-12);
    CHECK(std::abs(fused_probability(p, {5, 5}) - std::pow(p, 5)) < 1e-12);
    for (int k = 1; k < 5; ++k) CHECK(fused_probability(p, {k, 5}) > fused_probability(p, {k + 1, 5}));
    CHECK(fused_probability(p, {2, 5}) < fused_probability(p + 0.01, {2, 5}));
  }
  CHECK_THROWS_AS(FusionRule({0, 3}).validate(), DomainError);
  CHECK_THROWS_AS(FusionRule({4, 3}).validate(), DomainError);
}

TEST_CASE("enumeration oracle") {
  for (int M = 1; M <= 10; ++M) {
    for (double p : {0.125, 0.375, 0.5}) {
      std::vector<double> mass(M + 1, 0.0);
      for (int mask = 0; mask < (1 << M); ++mask) {
        int ones = __builtin_popcount(mask);
        double pr = 1.0;
        for (int i = 0; i < M; ++i) pr *= (mask >> i & 1) ? p : 1 - p;
        mass[ones] += pr;
      }
      for (int k = 1; k <= M; ++k) {
        double tail = 0;
        for (int j = k; j <= M; ++j) tail += mass[j];
        CHECK(std::abs(fused_probability(p, {k, M}) - tail) < 1e-15);
      }
    }
  }
}

TEST_CASE("heterogeneous tail") {
  const std::vector<double> same(4, 0.3);
  for (int k = 1; k <= 4; ++k) {
    CHECK(std::abs(fused_probability_heterogeneous(same, k) - fused_probability(0.3, {k, 4})) < 1e-15);
  }
  const std::vector<double> p{0.1, 0.5};
  CHECK(std::abs(fused_probability_heterogeneous(p, 1) - (1 - 0.9 * 0.5)) < 1e-15);
  CHECK(std::abs(fused_probability_heterogeneous(p, 2) - 0.05) < 1e-15);
}

TEST_CASE("local_for_fused inverts") {
  for (int k = 1; k <= 4; ++k) {
    const double p = local_for_fused(0.01, {k, 4});
    CHECK(std::abs(fused_probability(p, {k, 4}) - 0.01) < 1e-12);
  }
}

TEST_CASE("choose_k") {
  const auto one = choose_k([](double p) { return std::sqrt(p); }, 0.1, 1);
  CHECK(one.k_star == 1);
  const auto blind = choose_k([](double p) { return p; }, 0.1, 4);
  CHECK(blind.k_star == 1);
  for (const auto& o : blind.options) CHECK(std::abs(o.pd_total - 0.1) < 1e-9);
  // local ROC that refuses pfa above 0.2
  const auto capped = choose_k(
      [](double p) {
        if (p > 0.2) throw InfeasibleError("out of range");
        return std::pow(p, 0.2);
      },
      0.5, 4);
  CHECK_FALSE(capped.options[3].feasible);
  CHECK_FALSE(capped.options[3].note.empty());
  CHECK_THROWS_AS(choose_k([](double) -> double { throw InfeasibleError("none"); }, 0.1, 3), InfeasibleError);

  std::vector<LocalRocSample> roc;
  for (int i = 0; i <= 60; ++i) {
    const double p = std::pow(10.0, -6.0 + 0.1 * i);
    roc.push_back({static_cast<double>(i), p, std::pow(p, 0.3)});
  }
  const auto sampled = choose_k(roc, 0.05, 4);
  const auto exact = choose_k([](double p) { return std::pow(p, 0.3); }, 0.05, 4);
  CHECK(sampled.k_star == exact.k_star);
  CHECK(std::abs(sampled.pd_total - exact.pd_total) < 1e-3);  // interpolation error
}
