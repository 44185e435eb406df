#pragma once

#include <cstdint>
#include <random>

namespace locfade {

/// Independent random stream keyed by (seed, index). Every Monte Carlo
/// trial owns one, so results do not depend on how trials are scheduled.
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t index);

  double uniform();                 // [0, 1)
  double uniform(double lo, double hi);
  double normal();                  // N(0, 1)
  double gamma(double shape, double scale);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace locfade
