#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace bsq {

// splitmix64 finalizer; used to derive independent streams from (seed, tag)
// pairs without correlations between adjacent seeds.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic RNG wrapper. mt19937_64 has a standard-specified sequence and
// all transforms below are explicit, so results are reproducible across
// platforms for a given seed (the std distribution objects are not).
class Rng {
public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  static Rng derive(std::uint64_t seed, std::uint64_t stream) {
    return Rng(mix64(mix64(seed + 0x42ULL) ^ mix64(stream)));
  }

  std::uint64_t next() { return eng_(); }

  // uniform in [0, 1)
  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + uniform01() * (hi - lo); }

  // uniform integer in [0, n)
  std::size_t index(std::size_t n) {
    // 53-bit scaling; bias is < 2^-40 for any n used here
    auto i = static_cast<std::size_t>(uniform01() * static_cast<double>(n));
    return i < n ? i : n - 1;
  }

  // Box-Muller; no spare caching so the draw count per call is fixed
  double normal(double mu, double sigma) {
    double u1 = 1.0 - uniform01();  // (0, 1]
    double u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    return mu + sigma * r * std::cos(6.283185307179586476925286766559 * u2);
  }

private:
  std::mt19937_64 eng_;
};

}  // namespace bsq
