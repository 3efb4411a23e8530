#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace cloudhedge::rng {

// SplitMix64 output function (Steele, Lea & Flood). Advances `state` and
// returns the next 64-bit value.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Seed of substream `stream` rooted at `seed`. Constant time, so results
// do not depend on how many substreams a caller splits off.
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t s = seed;
  std::uint64_t root = splitmix64(s);
  s = root ^ (stream * 0xd1b54a32d192ed03ULL + 0x9e3779b97f4a7c15ULL);
  return splitmix64(s);
}

// Deterministic standard-normal stream: mt19937_64 uniforms mapped through
// the basic Box-Muller transform. The draw sequence for a given (seed,
// stream) pair is part of the public contract: identical seeds reproduce
// identical sequences on every run.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : engine_(seed) {}

  NormalStream(std::uint64_t seed, std::uint64_t stream)
      : engine_(substream_seed(seed, stream)) {}

  // Uniform on (0, 1]: top 53 bits of the engine output, shifted to exclude 0
  // so that log(u) below is always finite.
  double next_uniform() {
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
  }

  // Standard normal variate. Box-Muller produces a pair per two uniforms;
  // the second variate is cached and returned on the next call.
  double next_normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace cloudhedge::rng
