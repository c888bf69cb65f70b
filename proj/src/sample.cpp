#include "sfrec/sample.hpp"

#include <cmath>

#include "sfrec/dual.hpp"

namespace sfrec {

PointSet sample_points(const TriangleMesh& mesh, const SignedDistanceGrid& grid,
                       std::size_t n_volume, std::size_t n_surface, Rng& rng) {
  PointSet out;
  out.n_volume = n_volume;
  out.n_surface = n_surface;
  out.points.reserve(n_volume + n_surface);

  const double h = grid.layout.spacing;
  const double extent = h * grid.layout.resolution;
  const Vec3 lo = grid.layout.origin;
  const Vec3 hi = lo + Vec3{extent, extent, extent};

  bool has_curv = !mesh.empty() && mesh.curvature.size() == mesh.vertices.size();
  VertexLocator locator(mesh);

  auto weight_at = [&](const Vec3& p, double surface_curv, bool use_surface_curv) {
    double kappa = 0.0;
    if (use_surface_curv) {
      kappa = surface_curv;
    } else if (has_curv) {
      int v = locator.nearest(p);
      if (v >= 0) kappa = mesh.curvature[v];
    }
    return 1.0 + sigmoid(kappa);
  };

  for (std::size_t i = 0; i < n_volume; ++i) {
    SamplePoint sp;
    sp.position = rng.uniform_in_box(lo, hi);
    sp.target_occupancy = grid.sample(sp.position) <= 0 ? 1.0 : 0.0;
    sp.weight = weight_at(sp.position, 0.0, false);
    out.points.push_back(sp);
  }

  if (!mesh.empty() && n_surface > 0) {
    auto surf = sample_surface(mesh, n_surface, rng);
    for (const auto& s : surf) {
      SamplePoint sp;
      double offset = rng.uniform(-2.0 * h, 2.0 * h);
      sp.position = s.position + s.normal * offset;
      sp.target_occupancy = grid.sample(sp.position) <= 0 ? 1.0 : 0.0;
      sp.weight = weight_at(sp.position, s.curvature, has_curv);
      out.points.push_back(sp);
    }
  }
  return out;
}

}  // namespace sfrec
