#pragma once

#include <memory>
#include <vector>

#include "sfrec/grid.hpp"
#include "sfrec/mesh.hpp"

namespace sfrec {

enum class SignMethod { WindingNumber, RayParity };

// BVH over mesh triangles supporting exact nearest-triangle distance and
// generalized winding number queries (far nodes use a dipole approximation).
class MeshBvh {
 public:
  explicit MeshBvh(const TriangleMesh& mesh);
  ~MeshBvh();
  MeshBvh(MeshBvh&&) noexcept;

  double distance(const Vec3& p) const;        // unsigned
  double winding_number(const Vec3& p) const;  // ~1 inside, ~0 outside

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Signed distance at every cell center: magnitude is the exact distance to the
// mesh, sign from the winding number (or +x ray parity). Throws for
// non-watertight meshes unless force is set.
SignedDistanceGrid voxelize(const TriangleMesh& mesh, int resolution, bool force = false,
                            SignMethod sign = SignMethod::WindingNumber);

SignedDistanceGrid voxelize_on(const TriangleMesh& mesh, const GridLayout& layout,
                               bool force = false, SignMethod sign = SignMethod::WindingNumber);

}  // namespace sfrec
