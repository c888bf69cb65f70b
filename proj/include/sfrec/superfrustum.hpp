#pragma once

#include <array>
#include <string>

#include "sfrec/dual.hpp"
#include "sfrec/vec.hpp"

namespace sfrec {

// The eight shape scalars of one primitive.
//   sx, sy, sz  half-extents (> 0, world units)
//   r           profile roundness in [0, 1] (0 = rectangle, 1 = stadium/circle)
//   d           dilation >= 0 (world units)
//   t           taper in (-1, 1], fraction of the base half-width removed at +z
//   b           bulge in [-1, 1], circular-arc sagitta as a fraction of sz
//   o           shell thickness >= 0 (0 = solid)
struct SuperFrustumParams {
  double sx = 0.2, sy = 0.2, sz = 0.2;
  double r = 0.0;
  double d = 0.0;
  double t = 0.0;
  double b = 0.0;
  double o = 0.0;

  std::array<double, 8> to_array() const { return {sx, sy, sz, r, d, t, b, o}; }
  static SuperFrustumParams from_array(const std::array<double, 8>& a) {
    return {a[0], a[1], a[2], a[3], a[4], a[5], a[6], a[7]};
  }
  bool valid() const;
};

// Half-extent used by the sphere degeneracy (template shrinks the core to a
// point and grows the surface purely by dilation).
inline constexpr double kSphereEpsilon = 1e-7;

template <class T>
struct SfParamsT {
  T sx, sy, sz, r, d, t, b, o;
};

namespace detail {

// Distance from q to the segment a--b.
template <class T>
inline T segment_distance(const T& qx, const T& qy, const T& ax, const T& ay, const T& bx,
                          const T& by) {
  T ex = bx - ax, ey = by - ay;
  T px = qx - ax, py = qy - ay;
  T ee = ex * ex + ey * ey;
  T h = value_of(ee) > 0 ? sf_clamp((px * ex + py * ey) / ee, T(0.0), T(1.0)) : T(0.0);
  T dx = px - ex * h, dy = py - ey * h;
  return sf_sqrt(dx * dx + dy * dy);
}

// 2D rounded-rectangle signed distance, half-widths (sx, sy), corner radius rc.
template <class T>
inline T rounded_rect(const T& x, const T& y, const T& sx, const T& sy, const T& rc) {
  T qx = sf_abs(x) - (sx - rc);
  T qy = sf_abs(y) - (sy - rc);
  T qxp = sf_max(qx, T(0.0)), qyp = sf_max(qy, T(0.0));
  return sf_min(sf_max(qx, qy), T(0.0)) + sf_sqrt(qxp * qxp + qyp * qyp) - rc;
}

// Signed distance in the (u, z) half-plane to the silhouette region bounded by
// the caps z = +-sz and a lateral edge from (r1, -sz) to (r2, +sz): a straight
// segment when sagitta == 0, otherwise a circular arc (apex displaced along
// the outward chord normal for bulge > 0, inward for bulge < 0).
template <class T>
inline T silhouette_distance(const T& u, const T& z, const T& r1, const T& r2, const T& sz,
                             const T& bulge) {
  const T au = r1, az = -sz;
  const T bu = r2, bz = sz;

  // Chord geometry.
  T cu = bu - au, cz = bz - az;
  T chord2 = cu * cu + cz * cz;
  T chord = sf_sqrt(chord2);
  T inv_chord = T(1.0) / chord;
  T cun = cu * inv_chord, czn = cz * inv_chord;  // unit chord direction (czn > 0)
  T mu = czn, mz = -cun;                         // outward unit normal of the chord
  T mcu = (au + bu) * T(0.5), mcz = (az + bz) * T(0.5);

  // Keep the arc z-monotone so its endpoints stay the extreme-z points: cap
  // the half-span angle at (pi/2 - chord tilt).
  T half_chord = chord * T(0.5);
  T tilt = value_of(cun) != 0.0 ? sf_abs(sf_atan(cun / czn)) : T(0.0);
  T alpha_max = T(M_PI / 2) - tilt;
  T sag_cap = half_chord * sf_tan_half(alpha_max);
  T sag = sf_min(sf_abs(bulge) * sz, sag_cap);

  T dcap_top = segment_distance(u, z, T(0.0), sz, sf_max(r2, T(0.0)), sz);
  T dcap_bot = segment_distance(u, z, T(0.0), -sz, r1, -sz);

  T wu = u - mcu, wz = z - mcz;        // query relative to chord midpoint
  T wm = wu * mu + wz * mz;            // signed offset along outward normal
  // Lateral test against the chord line: inside the trapezoid side when the
  // point lies on or left of the chord.
  bool chord_side_inside = value_of(wm) <= 0.0;

  T d_lat;
  bool lateral_inside;
  if (value_of(sag) < 1e-300) {
    d_lat = segment_distance(u, z, au, az, bu, bz);
    lateral_inside = chord_side_inside;
  } else {
    T sigma = value_of(bulge) >= 0 ? T(1.0) : T(-1.0);
    T radius = (half_chord * half_chord + sag * sag) / (T(2.0) * sag);
    // Signed circle distance, evaluated through the expansion
    //   |q-C|^2 - R^2 = |w|^2 - hc^2 + 2 sigma (R - sag) (w.m)
    // which stays accurate as the arc flattens (R -> inf).
    T excess = wu * wu + wz * wz - half_chord * half_chord +
               T(2.0) * sigma * (radius - sag) * wm;
    T qc_norm = sf_sqrt(sf_max(excess + radius * radius, T(0.0)));
    T d_circle = excess / (qc_norm + radius);

    // Closest point on the full circle, then an arc-span test via the chord
    // parameter (valid because the arc never exceeds a semicircle).
    if (value_of(qc_norm) < 1e-150) {
      // Query at the circle center: every arc point is equidistant.
      d_lat = sf_abs(d_circle);
    } else {
      T dir_u = (wu + sigma * mu * (radius - sag)) / qc_norm;
      T dir_z = (wz + sigma * mz * (radius - sag)) / qc_norm;
      T pu = u - d_circle * dir_u, pz = z - d_circle * dir_z;
      T tau = ((pu - au) * cu + (pz - az) * cz) / chord2;
      // The projection must land on the arc, not the complementary side of
      // the circle, which shares the same chord-parameter range.
      double proj_side = value_of(sigma * ((pu - mcu) * mu + (pz - mcz) * mz));
      if (value_of(tau) >= 0.0 && value_of(tau) <= 1.0 && proj_side >= 0.0) {
        d_lat = sf_abs(d_circle);
      } else {
        T da_u = u - au, da_z = z - az;
        T db_u = u - bu, db_z = z - bz;
        d_lat = sf_min(sf_sqrt(da_u * da_u + da_z * da_z), sf_sqrt(db_u * db_u + db_z * db_z));
      }
    }

    // Region side of the lateral arc: bulge > 0 adds the circular lens outside
    // the chord, bulge < 0 carves it from the inside.
    bool in_lens = (value_of(sigma * wm) >= 0.0) && (value_of(d_circle) <= 0.0);
    lateral_inside = value_of(bulge) >= 0 ? (chord_side_inside || in_lens)
                                          : (chord_side_inside && !in_lens);
  }

  bool inside = (value_of(sf_abs(z)) <= value_of(sz)) && lateral_inside;
  T dist = sf_min(sf_min(dcap_top, dcap_bot), d_lat);
  return inside ? -dist : dist;
}

}  // namespace detail

// Signed distance of the SuperFrustum at a point in its canonical frame.
//
// Construction: a rounded-rectangle profile in xy is lifted to a half-plane
// coordinate u = prof + min(sx, sy); the (u, z) silhouette is a tapered,
// optionally arc-bulged trapezoid evaluated as an exact 2D signed distance;
// dilation then offsets the surface and a positive shell thickness o turns
// the solid into a shell via |f| - o.
template <class T>
T superfrustum_distance(const Vec3T<T>& p, const SfParamsT<T>& q) {
  T rc = q.r * sf_min(q.sx, q.sy);
  T prof = detail::rounded_rect(p.x, p.y, q.sx, q.sy, rc);
  T w0 = sf_min(q.sx, q.sy);
  T u = sf_max(prof + w0, T(0.0));

  T r1 = w0;
  T r2 = w0 * (T(1.0) - q.t);
  T f = detail::silhouette_distance(u, p.z, r1, r2, q.sz, q.b) - q.d;

  if (value_of(q.o) > 0.0) f = sf_abs(f) - q.o;
  return f;
}

inline double eval_sdf(const Vec3& p, const SuperFrustumParams& th) {
  SfParamsT<double> q{th.sx, th.sy, th.sz, th.r, th.d, th.t, th.b, th.o};
  return superfrustum_distance(Vec3T<double>{p.x, p.y, p.z}, q);
}

// Value plus derivatives w.r.t. the 8 shape parameters and the 3 point
// coordinates (exact forward-mode; a subgradient element at non-smooth loci).
struct SfGradient {
  double value = 0.0;
  std::array<double, 8> d_params{};
  Vec3 d_point{};
};

SfGradient eval_sdf_with_grad(const Vec3& p, const SuperFrustumParams& th);

// Canonical degeneracies of the primitive.
enum class CanonicalKind { Cuboid, Cylinder, Cone, Sphere, Tube, Shell };

inline constexpr int kCanonicalKindCount = 6;

const char* canonical_kind_name(CanonicalKind k);

// Template parameters for a canonical solid, sized from per-axis half-extent
// hints (Sphere/Shell use the mean hint as radius; Tube/Shell default to a
// wall of 0.2x the governing radius).
SuperFrustumParams canonical_params(CanonicalKind kind, const Vec3& half_extent_hints);

// Barycentric mixture over the canonical kinds.
struct SolidWeights {
  std::array<double, kCanonicalKindCount> logits{};
  std::array<double, kCanonicalKindCount> weights() const;
};

// Componentwise barycentric blend of the canonical templates, all sized from
// the same half-extent hints. One-hot weights reproduce the template exactly.
SuperFrustumParams blend_solid(const SolidWeights& w, const Vec3& half_extent_hints);

// Templated form of the blend so optimizer code can differentiate through the
// mixture (logits and hints as duals).
template <class T>
SfParamsT<T> blend_solid_t(const std::array<T, kCanonicalKindCount>& logits,
                           const Vec3T<T>& hints) {
  // Softmax over kind logits.
  T mx = logits[0];
  for (int k = 1; k < kCanonicalKindCount; ++k) mx = sf_max(mx, logits[k]);
  std::array<T, kCanonicalKindCount> w;
  T denom(0.0);
  for (int k = 0; k < kCanonicalKindCount; ++k) {
    w[k] = sf_exp(logits[k] - mx);
    denom += w[k];
  }
  for (auto& wk : w) wk = wk / denom;

  T hr = (hints.x + hints.y) * T(0.5);
  T radius = (hints.x + hints.y + hints.z) / T(3.0);
  const T eps(kSphereEpsilon);

  // Kind templates, laid out as {sx, sy, sz, r, d, t, b, o}.
  std::array<std::array<T, 8>, kCanonicalKindCount> tpl;
  tpl[0] = {hints.x, hints.y, hints.z, T(0.0), T(0.0), T(0.0), T(0.0), T(0.0)};   // Cuboid
  tpl[1] = {hr, hr, hints.z, T(1.0), T(0.0), T(0.0), T(0.0), T(0.0)};             // Cylinder
  tpl[2] = {hr, hr, hints.z, T(1.0), T(0.0), T(1.0), T(0.0), T(0.0)};             // Cone
  tpl[3] = {eps, eps, eps, T(1.0), radius, T(0.0), T(0.0), T(0.0)};               // Sphere
  tpl[4] = {hr, hr, hints.z, T(1.0), T(0.0), T(0.0), T(0.0), T(0.2) * hr};        // Tube
  tpl[5] = {eps, eps, eps, T(1.0), radius, T(0.0), T(0.0), T(0.2) * radius};      // Shell

  std::array<T, 8> mixed;
  for (int c = 0; c < 8; ++c) {
    mixed[c] = T(0.0);
    for (int k = 0; k < kCanonicalKindCount; ++k) mixed[c] += w[k] * tpl[k][c];
  }
  return SfParamsT<T>{mixed[0], mixed[1], mixed[2], mixed[3],
                      mixed[4], mixed[5], mixed[6], mixed[7]};
}

}  // namespace sfrec
