#pragma once

#include <cmath>
#include <cstdint>

namespace summ {

// Counter-based splittable generator (splitmix64 finalizer). Streams are
// reproducible across platforms and independent of call interleaving.
class Rng {
 public:
  explicit Rng(uint64_t seed) : key_(finalize(seed ^ 0x9e3779b97f4a7c15ULL)) {}

  uint64_t next_u64() { return finalize(key_ + (++ctr_) * 0x9e3779b97f4a7c15ULL); }

  /// Independent stream derived from this one's key; unaffected by draws.
  Rng split(uint64_t tag) const {
    return Rng(key_ ^ finalize(tag + 0x517cc1b727220a95ULL));
  }

  double uniform() {  // [0, 1)
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal(double mean = 0.0, double sd = 1.0) {
    double u1 = 1.0 - uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    return mean + sd * r * std::cos(6.283185307179586476925286766559 * u2);
  }

  int uniform_int(int n) {  // [0, n)
    return static_cast<int>(next_u64() % static_cast<uint64_t>(n));
  }

 private:
  static uint64_t finalize(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  uint64_t key_;
  uint64_t ctr_ = 0;
};

}  // namespace summ
