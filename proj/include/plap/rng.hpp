#pragma once
/// Counter-based seeding: every sample draws from its own generator derived
/// from (master seed, stream, index), so results do not depend on the order
/// in which samples are evaluated.

#include <cmath>
#include <cstdint>
#include <numbers>

namespace plap {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class SampleRng {
 public:
  SampleRng(std::uint64_t master, std::uint64_t stream, std::uint64_t index)
      : state_(splitmix64(splitmix64(master ^ splitmix64(stream)) + index)) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::uint64_t state_;
};

/// Stable 64-bit hash of a short tag, used to derive stream ids.
inline std::uint64_t stream_id(const char* tag) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const char* c = tag; *c; ++c) h = (h ^ static_cast<unsigned char>(*c)) * 1099511628211ULL;
  return h;
}

}  // namespace plap
