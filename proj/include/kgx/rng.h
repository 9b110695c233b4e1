#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace kgx {

// Deterministic 64-bit generator (splitmix64). Every consumer of randomness in
// this codebase goes through this struct so that a seed fully determines the
// output stream, independent of platform or standard library:
//
//   next():     s += 0x9E3779B97F4A7C15
//               z = s; z = (z ^ z>>30) * 0xBF58476D1CE4E5B9
//               z = (z ^ z>>27) * 0x94D049BB133111EB; return z ^ z>>31
//   uniform():  (next() >> 11) * 2^-53, in [0, 1)
//   below(n):   next() % n
//   gaussian(): Box-Muller, sqrt(-2 ln(1 - u1)) * cos(2 pi u2)
struct Rng {
  uint64_t state = 0;

  explicit Rng(uint64_t seed = 0) : state(seed) {}

  uint64_t next() {
    state += 0x9E3779B97F4A7C15ULL;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  uint64_t below(uint64_t n) { return n == 0 ? 0 : next() % n; }

  double gaussian(double mean, double sigma) {
    double u1 = uniform();
    double u2 = uniform();
    double z = std::sqrt(-2.0 * std::log(1.0 - u1)) * std::cos(2.0 * M_PI * u2);
    return mean + sigma * z;
  }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }
};

}  // namespace kgx
