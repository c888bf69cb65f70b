#pragma once

#include <cmath>
#include <cstdint>

#include "sfrec/vec.hpp"

namespace sfrec {

// xoshiro256++ with splitmix64 seeding. Bit-level output is pinned by this
// implementation so runs are reproducible across platforms and stdlibs.
class Rng {
 public:
  explicit Rng(uint64_t seed) {
    uint64_t x = seed;
    for (auto& si : s_) si = splitmix64(x);
  }

  // Derives an independent stream for (seed, stream ids); used to keep every
  // sampling site deterministic regardless of evaluation order.
  static Rng stream(uint64_t seed, uint64_t a, uint64_t b = 0, uint64_t c = 0) {
    uint64_t x = seed;
    x = splitmix64(x) ^ (a * 0x9E3779B97F4A7C15ull);
    x = splitmix64(x) ^ (b * 0xBF58476D1CE4E5B9ull);
    x = splitmix64(x) ^ (c * 0x94D049BB133111EBull);
    return Rng(splitmix64(x));
  }

  uint64_t next_u64() {
    uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform in [0, 1).
  double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  uint64_t uniform_index(uint64_t n) { return n ? uint64_t(uniform() * double(n)) % n : 0; }

  Vec3 uniform_in_box(const Vec3& lo, const Vec3& hi) {
    return {uniform(lo.x, hi.x), uniform(lo.y, hi.y), uniform(lo.z, hi.z)};
  }

  Vec3 unit_vector() {
    // Marsaglia rejection on the sphere.
    for (;;) {
      double a = uniform(-1, 1), b = uniform(-1, 1);
      double s = a * a + b * b;
      if (s >= 1.0) continue;
      double t = 2.0 * std::sqrt(1.0 - s);
      return {a * t, b * t, 1.0 - 2.0 * s};
    }
  }

  double gumbel() {
    // -log(-log(U)) with U in (0,1).
    double u = uniform();
    if (u <= 0.0) u = 0x1.0p-53;
    return -std::log(-std::log(u));
  }

  double normal() {
    // Box-Muller, explicit so the output stream stays pinned.
    double u1 = uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  Quat random_rotation() {
    // Shoemake uniform quaternion.
    double u1 = uniform(), u2 = uniform(), u3 = uniform();
    double a = std::sqrt(1.0 - u1), b = std::sqrt(u1);
    return quat_normalized({a * std::sin(2 * M_PI * u2), a * std::cos(2 * M_PI * u2),
                            b * std::sin(2 * M_PI * u3), b * std::cos(2 * M_PI * u3)});
  }

 private:
  static uint64_t splitmix64(uint64_t& x) {
    x += 0x9E3779B97F4A7C15ull;
    uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  uint64_t s_[4];
};

}  // namespace sfrec
