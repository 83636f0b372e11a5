#pragma once

#include <cmath>
#include <cstdint>

namespace acsos {

// Deterministic RNG with portable output. std::mt19937_64 has a pinned
// bitstream, but the std distribution transforms are implementation defined,
// so the transforms below are spelled out explicitly. Given the same seed the
// generated doubles are bit-identical on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(splitmix(seed)) {
    // decorrelate nearby seeds
    for (int i = 0; i < 4; ++i) next_u64();
  }

  // derive an independent stream, e.g. per retry or per worker shard
  Rng stream(std::uint64_t idx) const {
    Rng r(0);
    r.state_ = splitmix(state_ ^ (0x9e3779b97f4a7c15ULL * (idx + 1)));
    for (int i = 0; i < 4; ++i) r.next_u64();
    return r;
  }

  std::uint64_t next_u64() {
    // xorshift64* generator
    std::uint64_t x = state_;
    x ^= x >> 12;
    x ^= x << 25;
    x ^= x >> 27;
    state_ = x;
    return x * 0x2545F4914F6CDD1DULL;
  }

  // uniform in [0, 1)
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // standard normal via Marsaglia polar method
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    have_spare_ = true;
    return u * m;
  }

  double exponential() { return -std::log1p(-uniform()); }

  // Gamma(shape, 1) via Marsaglia-Tsang, boosted for shape < 1
  double gamma(double shape) {
    if (shape < 1.0) {
      const double u = uniform();
      return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  int uniform_int(int n) {  // uniform in {0, ..., n-1}
    return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n));
  }

  bool flip() { return (next_u64() & 1u) != 0; }

 private:
  static std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return (x ^ (x >> 31)) | 1ULL;
  }

  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace acsos
