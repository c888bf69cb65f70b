#pragma once

#include <vector>

#include "sfrec/grid.hpp"
#include "sfrec/mesh.hpp"
#include "sfrec/rng.hpp"

namespace sfrec {

struct SamplePoint {
  Vec3 position;
  double target_occupancy = 0;  // 0 or 1
  double weight = 1.5;          // 1 + sigmoid(curvature)
};

struct PointSet {
  std::vector<SamplePoint> points;
  std::size_t n_volume = 0;
  std::size_t n_surface = 0;
};

// Supervision points: n_volume uniform in the grid volume labeled by the sign
// of the interpolated field, and n_surface drawn area-uniformly on the mesh
// then jittered up to +-2 cell spacings along the normal. Weights use the
// curvature of the nearest mesh vertex.
PointSet sample_points(const TriangleMesh& mesh, const SignedDistanceGrid& grid,
                       std::size_t n_volume, std::size_t n_surface, Rng& rng);

}  // namespace sfrec
