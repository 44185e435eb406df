#include "locfade/random.hpp"

#include <array>

namespace locfade {

namespace {

std::mt19937_64 seeded_engine(std::uint64_t seed, std::uint64_t index) {
  std::array<std::uint32_t, 5> words = {
      static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
      0x6c6f6366u};  // domain tag
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

}  // namespace

Stream::Stream(std::uint64_t seed, std::uint64_t index) : engine_(seeded_engine(seed, index)) {}

double Stream::uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

double Stream::uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(engine_);
}

double Stream::normal() { return normal_(engine_); }

double Stream::gamma(double shape, double scale) {
  return std::gamma_distribution<double>(shape, scale)(engine_);
}

}  // namespace locfade
