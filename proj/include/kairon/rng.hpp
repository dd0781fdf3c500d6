#pragma once

#include <cstdint>

namespace kairon::rng {

// splitmix64 finalizer.  All randomized suites in this project draw through
// this generator so runs are reproducible across platforms and standard
// libraries (std:: distributions are not portable bit-for-bit).
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Sequential stream.
class Stream {
public:
  explicit Stream(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1)
  double u01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * u01(); }

  // uniform in {0, 1, ..., n-1}
  std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

private:
  std::uint64_t state_;
};

// Counter-based draw: sample i, slot k of a run seeded with `seed`.
// Order-independent, so parallel consumers reproduce the sequential result.
inline double u01_at(std::uint64_t seed, std::uint64_t counter, std::uint64_t slot) {
  std::uint64_t z = mix64(seed ^ mix64(counter ^ mix64(slot)));
  return static_cast<double>(z >> 11) * 0x1.0p-53;
}

}  // namespace kairon::rng
