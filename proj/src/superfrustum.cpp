#include "sfrec/superfrustum.hpp"

#include <cmath>
#include <stdexcept>

namespace sfrec {

bool SuperFrustumParams::valid() const {
  for (double v : to_array())
    if (!std::isfinite(v)) return false;
  return sx > 0 && sy > 0 && sz > 0 && r >= 0 && r <= 1 && d >= 0 && t > -1 && t <= 1 &&
         b >= -1 && b <= 1 && o >= 0;
}

SfGradient eval_sdf_with_grad(const Vec3& p, const SuperFrustumParams& th) {
  if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z))
    throw std::invalid_argument("eval_sdf_with_grad: non-finite point");

  using D = Dual<11>;
  SfParamsT<D> q{D::seed(th.sx, 0), D::seed(th.sy, 1), D::seed(th.sz, 2), D::seed(th.r, 3),
                 D::seed(th.d, 4),  D::seed(th.t, 5),  D::seed(th.b, 6),  D::seed(th.o, 7)};
  Vec3T<D> pd{D::seed(p.x, 8), D::seed(p.y, 9), D::seed(p.z, 10)};
  D f = superfrustum_distance(pd, q);

  SfGradient g;
  g.value = f.v;
  for (int i = 0; i < 8; ++i) g.d_params[i] = f.d[i];
  g.d_point = {f.d[8], f.d[9], f.d[10]};
  return g;
}

const char* canonical_kind_name(CanonicalKind k) {
  switch (k) {
    case CanonicalKind::Cuboid: return "cuboid";
    case CanonicalKind::Cylinder: return "cylinder";
    case CanonicalKind::Cone: return "cone";
    case CanonicalKind::Sphere: return "sphere";
    case CanonicalKind::Tube: return "tube";
    case CanonicalKind::Shell: return "shell";
  }
  return "unknown";
}

SuperFrustumParams canonical_params(CanonicalKind kind, const Vec3& hints) {
  // +-700 logits underflow the softmax tails to exactly zero, so the blend
  // returns the pure template.
  SolidWeights w;
  for (int k = 0; k < kCanonicalKindCount; ++k) w.logits[k] = (k == int(kind)) ? 700.0 : -700.0;
  return blend_solid(w, hints);
}

std::array<double, kCanonicalKindCount> SolidWeights::weights() const {
  std::array<double, kCanonicalKindCount> w;
  double mx = logits[0];
  for (double l : logits) mx = std::max(mx, l);
  double sum = 0;
  for (int k = 0; k < kCanonicalKindCount; ++k) {
    w[k] = std::exp(logits[k] - mx);
    sum += w[k];
  }
  for (auto& wk : w) wk /= sum;
  return w;
}

SuperFrustumParams blend_solid(const SolidWeights& w, const Vec3& hints) {
  std::array<double, kCanonicalKindCount> logits = w.logits;
  SfParamsT<double> q = blend_solid_t<double>(logits, {hints.x, hints.y, hints.z});
  return {q.sx, q.sy, q.sz, q.r, q.d, q.t, q.b, q.o};
}

}  // namespace sfrec
