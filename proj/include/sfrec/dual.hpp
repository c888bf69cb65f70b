#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace sfrec {

// Forward-mode dual number carrying N partial derivatives. Branches inside
// templated geometry code compare value parts, so piecewise functions yield
// one-sided derivatives at their seams.
template <int N>
struct Dual {
  double v = 0.0;
  std::array<double, N> d{};

  Dual() = default;
  Dual(double value) : v(value) {}  // NOLINT: implicit from constants is intended

  static Dual seed(double value, int slot) {
    Dual r(value);
    r.d[slot] = 1.0;
    return r;
  }

  Dual operator-() const {
    Dual r(-v);
    for (int i = 0; i < N; ++i) r.d[i] = -d[i];
    return r;
  }
  Dual& operator+=(const Dual& o) {
    v += o.v;
    for (int i = 0; i < N; ++i) d[i] += o.d[i];
    return *this;
  }
  Dual& operator-=(const Dual& o) {
    v -= o.v;
    for (int i = 0; i < N; ++i) d[i] -= o.d[i];
    return *this;
  }
  Dual& operator*=(const Dual& o) {
    for (int i = 0; i < N; ++i) d[i] = d[i] * o.v + v * o.d[i];
    v *= o.v;
    return *this;
  }
};

template <int N> inline Dual<N> operator+(Dual<N> a, const Dual<N>& b) { return a += b; }
template <int N> inline Dual<N> operator-(Dual<N> a, const Dual<N>& b) { return a -= b; }
template <int N> inline Dual<N> operator*(Dual<N> a, const Dual<N>& b) { return a *= b; }

template <int N>
inline Dual<N> operator/(const Dual<N>& a, const Dual<N>& b) {
  Dual<N> r(a.v / b.v);
  double inv = 1.0 / (b.v * b.v);
  for (int i = 0; i < N; ++i) r.d[i] = (a.d[i] * b.v - a.v * b.d[i]) * inv;
  return r;
}

template <int N> inline bool operator<(const Dual<N>& a, const Dual<N>& b) { return a.v < b.v; }
template <int N> inline bool operator>(const Dual<N>& a, const Dual<N>& b) { return a.v > b.v; }
template <int N> inline bool operator<=(const Dual<N>& a, const Dual<N>& b) { return a.v <= b.v; }
template <int N> inline bool operator>=(const Dual<N>& a, const Dual<N>& b) { return a.v >= b.v; }

// Scalar-generic math. The double overloads let templated code call these
// unqualified for both scalar types.
inline double value_of(double x) { return x; }
template <int N> inline double value_of(const Dual<N>& x) { return x.v; }

inline double sf_sqrt(double x) { return std::sqrt(x); }
template <int N>
inline Dual<N> sf_sqrt(const Dual<N>& a) {
  Dual<N> r(std::sqrt(a.v));
  double g = r.v > 0 ? 0.5 / r.v : 0.0;
  for (int i = 0; i < N; ++i) r.d[i] = a.d[i] * g;
  return r;
}

inline double sf_abs(double x) { return std::fabs(x); }
template <int N>
inline Dual<N> sf_abs(const Dual<N>& a) {
  return a.v >= 0 ? a : -a;
}

inline double sf_min(double a, double b) { return a < b ? a : b; }
inline double sf_max(double a, double b) { return a > b ? a : b; }
template <int N> inline Dual<N> sf_min(const Dual<N>& a, const Dual<N>& b) { return a.v < b.v ? a : b; }
template <int N> inline Dual<N> sf_max(const Dual<N>& a, const Dual<N>& b) { return a.v > b.v ? a : b; }

template <class T>
inline T sf_clamp(const T& x, const T& lo, const T& hi) {
  return sf_min(sf_max(x, lo), hi);
}

inline double sf_exp(double x) { return std::exp(x); }
template <int N>
inline Dual<N> sf_exp(const Dual<N>& a) {
  Dual<N> r(std::exp(a.v));
  for (int i = 0; i < N; ++i) r.d[i] = a.d[i] * r.v;
  return r;
}

inline double sf_log(double x) { return std::log(x); }
template <int N>
inline Dual<N> sf_log(const Dual<N>& a) {
  Dual<N> r(std::log(a.v));
  double g = 1.0 / a.v;
  for (int i = 0; i < N; ++i) r.d[i] = a.d[i] * g;
  return r;
}

inline double sf_tanh(double x) { return std::tanh(x); }
template <int N>
inline Dual<N> sf_tanh(const Dual<N>& a) {
  Dual<N> r(std::tanh(a.v));
  double g = 1.0 - r.v * r.v;
  for (int i = 0; i < N; ++i) r.d[i] = a.d[i] * g;
  return r;
}

inline double sf_atan(double x) { return std::atan(x); }
template <int N>
inline Dual<N> sf_atan(const Dual<N>& a) {
  Dual<N> r(std::atan(a.v));
  double g = 1.0 / (1.0 + a.v * a.v);
  for (int i = 0; i < N; ++i) r.d[i] = a.d[i] * g;
  return r;
}

inline double sf_tan_half(double x) { return std::tan(0.5 * x); }
template <int N>
inline Dual<N> sf_tan_half(const Dual<N>& a) {
  Dual<N> r(std::tan(0.5 * a.v));
  double c = std::cos(0.5 * a.v);
  double g = 0.5 / (c * c);
  for (int i = 0; i < N; ++i) r.d[i] = a.d[i] * g;
  return r;
}

template <class T>
inline T sigmoid(const T& x) {
  // Stable for both tails; works on duals through sf_exp.
  if (value_of(x) >= 0) {
    T e = sf_exp(-x);
    return T(1.0) / (T(1.0) + e);
  }
  T e = sf_exp(x);
  return e / (T(1.0) + e);
}

template <class T>
inline T softplus(const T& x) {
  // log(1 + e^x) without overflow.
  if (value_of(x) > 30.0) return x;
  return sf_log(T(1.0) + sf_exp(x));
}

inline double softplus_inverse(double y) {
  // Inverse of log(1+e^x): x = log(e^y - 1).
  if (y > 30.0) return y;
  return std::log(std::expm1(y));
}

}  // namespace sfrec
