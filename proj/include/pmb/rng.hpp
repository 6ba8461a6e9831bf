#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace pmb {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Reward stream with raw-bit uniforms so trial outputs do not depend on the
// standard library's distribution implementations.
struct Rng {
  std::mt19937_64 gen;
  bool has_spare = false;
  double spare = 0.0;

  explicit Rng(std::uint64_t seed) : gen(seed) {}

  static std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial_index) {
    return splitmix64(splitmix64(master_seed) ^ splitmix64(trial_index + 0x51ed2701a9b3c4d5ULL));
  }

  static Rng for_trial(std::uint64_t master_seed, std::uint64_t trial_index) {
    return Rng(trial_seed(master_seed, trial_index));
  }

  // uniform in [0, 1)
  double uniform() { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

  // uniform in (0, 1)
  double uniform_open() {
    return (static_cast<double>(gen() >> 11) + 0.5) * 0x1.0p-53;
  }

  std::uint64_t next_u64() { return gen(); }

  // uniform integer in [0, n)
  std::uint64_t below(std::uint64_t n) {
    // modulo bias is negligible for n far below 2^64 and keeps the stream simple
    return gen() % n;
  }

  double gaussian() {
    if (has_spare) {
      has_spare = false;
      return spare;
    }
    double u1 = uniform_open();
    double u2 = uniform_open();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * std::numbers::pi * u2;
    spare = r * std::sin(a);
    has_spare = true;
    return r * std::cos(a);
  }
};

}  // namespace pmb
