#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

namespace sfrec {

// Small 3D math types templated on the scalar so the same geometry code
// runs on plain doubles and on forward-mode dual numbers.

template <class T>
struct Vec3T {
  T x{}, y{}, z{};

  Vec3T() = default;
  Vec3T(T x_, T y_, T z_) : x(x_), y(y_), z(z_) {}

  T& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
  const T& operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

  Vec3T operator-() const { return {-x, -y, -z}; }
  Vec3T operator+(const Vec3T& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3T operator-(const Vec3T& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3T operator*(const T& s) const { return {x * s, y * s, z * s}; }
  Vec3T operator/(const T& s) const { return {x / s, y / s, z / s}; }
  Vec3T& operator+=(const Vec3T& o) { x += o.x; y += o.y; z += o.z; return *this; }
  Vec3T& operator-=(const Vec3T& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
  Vec3T& operator*=(const T& s) { x *= s; y *= s; z *= s; return *this; }
};

using Vec3 = Vec3T<double>;

template <class T>
inline Vec3T<T> operator*(const T& s, const Vec3T<T>& v) { return v * s; }
inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

template <class T>
inline T dot(const Vec3T<T>& a, const Vec3T<T>& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

template <class T>
inline Vec3T<T> cross(const Vec3T<T>& a, const Vec3T<T>& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double length(const Vec3& v) { return std::sqrt(dot(v, v)); }
inline double length2(const Vec3& v) { return dot(v, v); }

inline Vec3 normalized(const Vec3& v) {
  double n = length(v);
  return n > 0 ? v / n : Vec3{0, 0, 0};
}

inline Vec3 cwise_min(const Vec3& a, const Vec3& b) {
  return {std::min(a.x, b.x), std::min(a.y, b.y), std::min(a.z, b.z)};
}
inline Vec3 cwise_max(const Vec3& a, const Vec3& b) {
  return {std::max(a.x, b.x), std::max(a.y, b.y), std::max(a.z, b.z)};
}

struct Box3 {
  Vec3 lo{std::numeric_limits<double>::max(), std::numeric_limits<double>::max(),
          std::numeric_limits<double>::max()};
  Vec3 hi{std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest(),
          std::numeric_limits<double>::lowest()};

  void expand(const Vec3& p) { lo = cwise_min(lo, p); hi = cwise_max(hi, p); }
  void expand(const Box3& b) { lo = cwise_min(lo, b.lo); hi = cwise_max(hi, b.hi); }
  bool empty() const { return lo.x > hi.x; }
  Vec3 center() const { return (lo + hi) * 0.5; }
  Vec3 extent() const { return hi - lo; }
  double diagonal() const { return empty() ? 0.0 : length(extent()); }
  double longest_side() const {
    Vec3 e = extent();
    return std::max({e.x, e.y, e.z});
  }
};

// Unit quaternion (w, x, y, z). Rotation application normalizes internally so
// derivatives taken w.r.t. raw components respect the unit constraint.
template <class T>
struct QuatT {
  T w{}, x{}, y{}, z{};
};

using Quat = QuatT<double>;

inline Quat quat_identity() { return {1.0, 0.0, 0.0, 0.0}; }

inline Quat quat_normalized(const Quat& q) {
  double n = std::sqrt(q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z);
  if (n == 0) return quat_identity();
  return {q.w / n, q.x / n, q.y / n, q.z / n};
}

inline Quat quat_mul(const Quat& a, const Quat& b) {
  return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
          a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
          a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
          a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

// Shortest-arc rotation taking unit vector `from` to unit vector `to`.
inline Quat quat_from_two_vectors(const Vec3& from, const Vec3& to) {
  double c = dot(from, to);
  if (c < -1.0 + 1e-12) {
    // Opposite vectors: rotate pi around any perpendicular axis.
    Vec3 axis = cross(from, Vec3{1, 0, 0});
    if (length2(axis) < 1e-12) axis = cross(from, Vec3{0, 1, 0});
    axis = normalized(axis);
    return {0.0, axis.x, axis.y, axis.z};
  }
  Vec3 a = cross(from, to);
  Quat q{1.0 + c, a.x, a.y, a.z};
  return quat_normalized(q);
}

struct Mat3 {
  // Row-major.
  std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

  double operator()(int r, int c) const { return m[r * 3 + c]; }
  double& operator()(int r, int c) { return m[r * 3 + c]; }

  Vec3 col(int c) const { return {m[c], m[3 + c], m[6 + c]}; }

  Vec3 operator*(const Vec3& v) const {
    return {m[0] * v.x + m[1] * v.y + m[2] * v.z,
            m[3] * v.x + m[4] * v.y + m[5] * v.z,
            m[6] * v.x + m[7] * v.y + m[8] * v.z};
  }
  Mat3 transposed() const {
    Mat3 t;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) t(r, c) = (*this)(c, r);
    return t;
  }
  double det() const {
    return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
           m[2] * (m[3] * m[7] - m[4] * m[6]);
  }
};

inline Mat3 mat_from_columns(const Vec3& c0, const Vec3& c1, const Vec3& c2) {
  Mat3 r;
  r(0, 0) = c0.x; r(0, 1) = c1.x; r(0, 2) = c2.x;
  r(1, 0) = c0.y; r(1, 1) = c1.y; r(1, 2) = c2.y;
  r(2, 0) = c0.z; r(2, 1) = c1.z; r(2, 2) = c2.z;
  return r;
}

inline Mat3 quat_to_matrix(const Quat& qu) {
  Quat q = quat_normalized(qu);
  Mat3 r;
  double w = q.w, x = q.x, y = q.y, z = q.z;
  r(0, 0) = 1 - 2 * (y * y + z * z);
  r(0, 1) = 2 * (x * y - w * z);
  r(0, 2) = 2 * (x * z + w * y);
  r(1, 0) = 2 * (x * y + w * z);
  r(1, 1) = 1 - 2 * (x * x + z * z);
  r(1, 2) = 2 * (y * z - w * x);
  r(2, 0) = 2 * (x * z - w * y);
  r(2, 1) = 2 * (y * z + w * x);
  r(2, 2) = 1 - 2 * (x * x + y * y);
  return r;
}

inline Quat quat_from_matrix(const Mat3& r) {
  Quat q;
  double tr = r(0, 0) + r(1, 1) + r(2, 2);
  if (tr > 0) {
    double s = std::sqrt(tr + 1.0) * 2;
    q.w = 0.25 * s;
    q.x = (r(2, 1) - r(1, 2)) / s;
    q.y = (r(0, 2) - r(2, 0)) / s;
    q.z = (r(1, 0) - r(0, 1)) / s;
  } else if (r(0, 0) > r(1, 1) && r(0, 0) > r(2, 2)) {
    double s = std::sqrt(1.0 + r(0, 0) - r(1, 1) - r(2, 2)) * 2;
    q.w = (r(2, 1) - r(1, 2)) / s;
    q.x = 0.25 * s;
    q.y = (r(0, 1) + r(1, 0)) / s;
    q.z = (r(0, 2) + r(2, 0)) / s;
  } else if (r(1, 1) > r(2, 2)) {
    double s = std::sqrt(1.0 + r(1, 1) - r(0, 0) - r(2, 2)) * 2;
    q.w = (r(0, 2) - r(2, 0)) / s;
    q.x = (r(0, 1) + r(1, 0)) / s;
    q.y = 0.25 * s;
    q.z = (r(1, 2) + r(2, 1)) / s;
  } else {
    double s = std::sqrt(1.0 + r(2, 2) - r(0, 0) - r(1, 1)) * 2;
    q.w = (r(1, 0) - r(0, 1)) / s;
    q.x = (r(0, 2) + r(2, 0)) / s;
    q.y = (r(1, 2) + r(2, 1)) / s;
    q.z = 0.25 * s;
  }
  return quat_normalized(q);
}

}  // namespace sfrec
