#pragma once

#include <array>
#include <string>
#include <vector>

#include "sfrec/rng.hpp"
#include "sfrec/vec.hpp"

namespace sfrec {

struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<double> curvature;  // per-vertex, optional (empty until estimated)
  bool watertight = false;

  bool empty() const { return vertices.empty() || triangles.empty(); }
  Box3 bounding_box() const;
  double area() const;
  // Signed volume by divergence theorem; meaningful for closed meshes.
  double volume() const;

  Vec3 triangle_normal(int t) const;
  double triangle_area(int t) const;
};

// Drops zero-area triangles (area <= 1e-12), checks index ranges, and records
// whether every edge is shared by exactly two triangles.
void finalize_mesh(TriangleMesh& mesh);

// Uniform similarity that centers the bounding box at the origin and scales
// the longest side to 1. apply() maps original to normalized coordinates.
struct NormalizeTransform {
  Vec3 center{0, 0, 0};
  double scale = 1.0;

  Vec3 apply(const Vec3& p) const { return (p - center) * scale; }
  Vec3 invert(const Vec3& p) const { return p / scale + center; }
};

NormalizeTransform normalize_mesh(TriangleMesh& mesh);

// Per-vertex maximum-absolute principal curvature from a quadric fit over the
// 2-ring neighborhood, made dimensionless by the bounding-box diagonal.
// Vertices with too few neighbors get 0. Also stored in mesh.curvature.
std::vector<double> estimate_curvature(TriangleMesh& mesh);

struct SurfaceSample {
  Vec3 position;
  Vec3 normal;
  double curvature;  // barycentric interpolation of vertex curvature
};

// Area-uniform surface samples; deterministic given the rng.
std::vector<SurfaceSample> sample_surface(const TriangleMesh& mesh, std::size_t count, Rng& rng);

// Nearest-vertex queries against a fixed mesh (uniform-grid bins).
class VertexLocator {
 public:
  explicit VertexLocator(const TriangleMesh& mesh);
  int nearest(const Vec3& p) const;

 private:
  const TriangleMesh& mesh_;
  Box3 box_;
  double cell_ = 1.0;
  int dims_[3] = {1, 1, 1};
  std::vector<std::vector<int>> bins_;
  std::size_t bin_of(int i, int j, int k) const {
    return (std::size_t(k) * dims_[1] + j) * dims_[0] + i;
  }
};

}  // namespace sfrec
