#pragma once

// Independent analytic signed-distance oracles and helpers used only by the
// test suites. Nothing here shares code with the library's primitive
// evaluation path.

#include <cmath>
#include <vector>

#include "sfrec/vec.hpp"

namespace oracle {

using sfrec::Vec3;

inline double sd_sphere(const Vec3& p, double radius) { return sfrec::length(p) - radius; }

inline double sd_box(const Vec3& p, const Vec3& half) {
  Vec3 q{std::fabs(p.x) - half.x, std::fabs(p.y) - half.y, std::fabs(p.z) - half.z};
  Vec3 qp{std::max(q.x, 0.0), std::max(q.y, 0.0), std::max(q.z, 0.0)};
  return sfrec::length(qp) + std::min(std::max({q.x, q.y, q.z}), 0.0);
}

inline double sd_capped_cylinder(const Vec3& p, double radius, double half_height) {
  double dr = std::hypot(p.x, p.y) - radius;
  double dz = std::fabs(p.z) - half_height;
  double drp = std::max(dr, 0.0), dzp = std::max(dz, 0.0);
  return std::min(std::max(dr, dz), 0.0) + std::hypot(drp, dzp);
}

// Capped cone with radius r_bottom at z = -h and r_top at z = +h.
inline double sd_capped_cone(const Vec3& p, double h, double r_bottom, double r_top) {
  double q_x = std::hypot(p.x, p.y), q_y = p.z;
  double k1_x = r_top, k1_y = h;
  double k2_x = r_top - r_bottom, k2_y = 2.0 * h;
  double ca_x = q_x - std::min(q_x, (q_y < 0.0) ? r_bottom : r_top);
  double ca_y = std::fabs(q_y) - h;
  double denom = k2_x * k2_x + k2_y * k2_y;
  double tt = denom > 0 ? std::clamp(((k1_x - q_x) * k2_x + (k1_y - q_y) * k2_y) / denom, 0.0, 1.0)
                        : 0.0;
  double cb_x = q_x - k1_x + k2_x * tt;
  double cb_y = q_y - k1_y + k2_y * tt;
  double s = (cb_x < 0.0 && ca_y < 0.0) ? -1.0 : 1.0;
  return s * std::sqrt(std::min(ca_x * ca_x + ca_y * ca_y, cb_x * cb_x + cb_y * cb_y));
}

inline double sd_capsule(const Vec3& p, const Vec3& a, const Vec3& b, double radius) {
  Vec3 pa = p - a, ba = b - a;
  double h = std::clamp(sfrec::dot(pa, ba) / sfrec::dot(ba, ba), 0.0, 1.0);
  return sfrec::length(pa - ba * h) - radius;
}

// Shell of an analytic solid: wall of thickness `o` straddling its surface.
template <class F>
double sd_onion(F&& solid, const Vec3& p, double o) {
  return std::fabs(solid(p)) - o;
}

inline double relative_error(double got, double want, double floor = 1e-8) {
  return std::fabs(got - want) / std::max(std::fabs(want), floor);
}

}  // namespace oracle
