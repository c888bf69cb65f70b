#include "sfrec/voxelize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "sfrec/parallel.hpp"

namespace sfrec {

namespace {

// Closest point on triangle abc to p (Ericson, Real-Time Collision Detection).
Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  Vec3 ab = b - a, ac = c - a, ap = p - a;
  double d1 = dot(ab, ap), d2 = dot(ac, ap);
  if (d1 <= 0 && d2 <= 0) return a;

  Vec3 bp = p - b;
  double d3 = dot(ab, bp), d4 = dot(ac, bp);
  if (d3 >= 0 && d4 <= d3) return b;

  double vc = d1 * d4 - d3 * d2;
  if (vc <= 0 && d1 >= 0 && d3 <= 0) return a + ab * (d1 / (d1 - d3));

  Vec3 cp = p - c;
  double d5 = dot(ab, cp), d6 = dot(ac, cp);
  if (d6 >= 0 && d5 <= d6) return c;

  double vb = d5 * d2 - d1 * d6;
  if (vb <= 0 && d2 >= 0 && d6 <= 0) return a + ac * (d2 / (d2 - d6));

  double va = d3 * d6 - d5 * d4;
  if (va <= 0 && (d4 - d3) >= 0 && (d5 - d6) >= 0)
    return b + (c - b) * ((d4 - d3) / ((d4 - d3) + (d5 - d6)));

  double denom = 1.0 / (va + vb + vc);
  return a + ab * (vb * denom) + ac * (vc * denom);
}

// Solid angle of triangle abc seen from the origin (Van Oosterom-Strackee).
double solid_angle(const Vec3& a, const Vec3& b, const Vec3& c) {
  double la = length(a), lb = length(b), lc = length(c);
  double numerator = dot(a, cross(b, c));
  double denom = la * lb * lc + dot(a, b) * lc + dot(b, c) * la + dot(c, a) * lb;
  return 2.0 * std::atan2(numerator, denom);
}

struct BvhNode {
  Box3 box;
  Vec3 dipole_center{0, 0, 0};   // area-weighted triangle centroid
  Vec3 dipole_normal{0, 0, 0};   // sum of area-weighted normals
  double radius = 0;             // bounding radius around dipole_center
  int left = -1, right = -1;     // children, or
  int first = 0, count = 0;      // leaf triangle range
};

}  // namespace

struct MeshBvh::Impl {
  const TriangleMesh& mesh;
  std::vector<int> tri_order;
  std::vector<BvhNode> nodes;

  explicit Impl(const TriangleMesh& m) : mesh(m) {
    tri_order.resize(mesh.triangles.size());
    std::iota(tri_order.begin(), tri_order.end(), 0);
    if (!tri_order.empty()) build(0, int(tri_order.size()));
  }

  Vec3 centroid(int t) const {
    const auto& tri = mesh.triangles[t];
    return (mesh.vertices[tri[0]] + mesh.vertices[tri[1]] + mesh.vertices[tri[2]]) / 3.0;
  }

  int build(int first, int count) {
    BvhNode node;
    node.first = first;
    node.count = count;
    double total_area = 0;
    for (int i = first; i < first + count; ++i) {
      int t = tri_order[i];
      const auto& tri = mesh.triangles[t];
      for (int v : tri) node.box.expand(mesh.vertices[v]);
      Vec3 n = cross(mesh.vertices[tri[1]] - mesh.vertices[tri[0]],
                     mesh.vertices[tri[2]] - mesh.vertices[tri[0]]) *
               0.5;
      double area = length(n);
      node.dipole_normal += n;
      node.dipole_center += centroid(t) * area;
      total_area += area;
    }
    if (total_area > 0) node.dipole_center = node.dipole_center / total_area;
    node.radius = 0;
    for (int i = first; i < first + count; ++i)
      for (int v : mesh.triangles[tri_order[i]])
        node.radius = std::max(node.radius, length(mesh.vertices[v] - node.dipole_center));

    int self = int(nodes.size());
    nodes.push_back(node);
    if (count <= 8) return self;

    // Median split on the widest centroid axis.
    Box3 cbox;
    for (int i = first; i < first + count; ++i) cbox.expand(centroid(tri_order[i]));
    Vec3 ext = cbox.extent();
    int axis = ext.x >= ext.y && ext.x >= ext.z ? 0 : (ext.y >= ext.z ? 1 : 2);
    int mid = first + count / 2;
    std::nth_element(tri_order.begin() + first, tri_order.begin() + mid,
                     tri_order.begin() + first + count,
                     [&](int ta, int tb) { return centroid(ta)[axis] < centroid(tb)[axis]; });
    int l = build(first, mid - first);
    int r = build(mid, first + count - mid);
    nodes[self].left = l;
    nodes[self].right = r;
    nodes[self].count = 0;
    return self;
  }

  double box_distance2(const Box3& box, const Vec3& p) const {
    double d2 = 0;
    for (int a = 0; a < 3; ++a) {
      double v = p[a];
      double lo = box.lo[a], hi = box.hi[a];
      if (v < lo) d2 += (lo - v) * (lo - v);
      if (v > hi) d2 += (v - hi) * (v - hi);
    }
    return d2;
  }

  void nearest(int ni, const Vec3& p, double& best2) const {
    const BvhNode& node = nodes[ni];
    if (box_distance2(node.box, p) >= best2) return;
    if (node.left < 0) {
      for (int i = node.first; i < node.first + node.count; ++i) {
        const auto& tri = mesh.triangles[tri_order[i]];
        Vec3 cp = closest_point_on_triangle(p, mesh.vertices[tri[0]], mesh.vertices[tri[1]],
                                            mesh.vertices[tri[2]]);
        best2 = std::min(best2, length2(cp - p));
      }
      return;
    }
    double dl = box_distance2(nodes[node.left].box, p);
    double dr = box_distance2(nodes[node.right].box, p);
    if (dl < dr) {
      nearest(node.left, p, best2);
      nearest(node.right, p, best2);
    } else {
      nearest(node.right, p, best2);
      nearest(node.left, p, best2);
    }
  }

  double winding(int ni, const Vec3& p) const {
    const BvhNode& node = nodes[ni];
    Vec3 rel = node.dipole_center - p;
    double dist = length(rel);
    if (dist > 2.0 * node.radius && node.radius > 0) {
      // First-order dipole approximation of the summed solid angles.
      return dot(node.dipole_normal, rel) / (dist * dist * dist);
    }
    if (node.left < 0) {
      double w = 0;
      for (int i = node.first; i < node.first + node.count; ++i) {
        const auto& tri = mesh.triangles[tri_order[i]];
        w += solid_angle(mesh.vertices[tri[0]] - p, mesh.vertices[tri[1]] - p,
                         mesh.vertices[tri[2]] - p);
      }
      return w;
    }
    return winding(node.left, p) + winding(node.right, p);
  }
};

MeshBvh::MeshBvh(const TriangleMesh& mesh) : impl_(std::make_unique<Impl>(mesh)) {}
MeshBvh::~MeshBvh() = default;
MeshBvh::MeshBvh(MeshBvh&&) noexcept = default;

double MeshBvh::distance(const Vec3& p) const {
  if (impl_->nodes.empty()) return std::numeric_limits<double>::max();
  double best2 = std::numeric_limits<double>::max();
  impl_->nearest(0, p, best2);
  return std::sqrt(best2);
}

double MeshBvh::winding_number(const Vec3& p) const {
  if (impl_->nodes.empty()) return 0;
  return impl_->winding(0, p) / (4.0 * M_PI);
}

namespace {

// Inside flags for all cells of one (j, k) row via +x ray crossings.
void parity_row(const TriangleMesh& mesh, const std::vector<int>& tris, const GridLayout& layout,
                int j, int k, std::vector<uint8_t>& inside_row) {
  double y = layout.origin.y + layout.spacing * (j + 0.5);
  double z = layout.origin.z + layout.spacing * (k + 0.5);
  std::vector<double> crossings;
  for (int t : tris) {
    const auto& tri = mesh.triangles[t];
    const Vec3& a = mesh.vertices[tri[0]];
    const Vec3& b = mesh.vertices[tri[1]];
    const Vec3& c = mesh.vertices[tri[2]];
    // Ray origin (-inf, y, z), direction +x: 2D point-in-triangle in (y, z).
    double d1 = (b.y - a.y) * (z - a.z) - (b.z - a.z) * (y - a.y);
    double d2 = (c.y - b.y) * (z - b.z) - (c.z - b.z) * (y - b.y);
    double d3 = (a.y - c.y) * (z - c.z) - (a.z - c.z) * (y - c.y);
    bool has_neg = (d1 < 0) || (d2 < 0) || (d3 < 0);
    bool has_pos = (d1 > 0) || (d2 > 0) || (d3 > 0);
    if (has_neg && has_pos) continue;
    // Barycentric interpolation of x at (y, z).
    double det = (b.y - a.y) * (c.z - a.z) - (c.y - a.y) * (b.z - a.z);
    if (std::fabs(det) < 1e-18) continue;
    double w1 = ((y - a.y) * (c.z - a.z) - (c.y - a.y) * (z - a.z)) / det;
    double w2 = ((b.y - a.y) * (z - a.z) - (y - a.y) * (b.z - a.z)) / det;
    double x = a.x + w1 * (b.x - a.x) + w2 * (c.x - a.x);
    crossings.push_back(x);
  }
  std::sort(crossings.begin(), crossings.end());
  int n = layout.resolution;
  std::size_t ci = 0;
  bool in = false;
  for (int i = 0; i < n; ++i) {
    double x = layout.origin.x + layout.spacing * (i + 0.5);
    while (ci < crossings.size() && crossings[ci] < x) {
      in = !in;
      ++ci;
    }
    inside_row[i] = in ? 1 : 0;
  }
}

}  // namespace

SignedDistanceGrid voxelize_on(const TriangleMesh& mesh, const GridLayout& layout, bool force,
                               SignMethod sign) {
  if (mesh.empty()) throw std::runtime_error("voxelize: empty mesh");
  if (!mesh.watertight && !force)
    throw std::runtime_error("voxelize: mesh is not watertight (use force to override)");

  MeshBvh bvh(mesh);
  SignedDistanceGrid out = SignedDistanceGrid::filled(layout, 0.0);
  const int n = layout.resolution;

  std::vector<uint8_t> inside(layout.cell_count(), 0);
  if (sign == SignMethod::WindingNumber) {
    parallel_for(std::size_t(n), [&](std::size_t kz) {
      int k = int(kz);
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
          Vec3 p = layout.cell_center(i, j, k);
          inside[layout.index(i, j, k)] = bvh.winding_number(p) > 0.5 ? 1 : 0;
        }
    });
  } else {
    // Bin triangles by the (j, k) rows their bounding box overlaps.
    std::vector<std::vector<int>> row_tris(std::size_t(n) * n);
    for (int t = 0; t < int(mesh.triangles.size()); ++t) {
      Box3 tb;
      for (int v : mesh.triangles[t]) tb.expand(mesh.vertices[v]);
      int j0 = std::clamp(int((tb.lo.y - layout.origin.y) / layout.spacing - 0.5), 0, n - 1);
      int j1 = std::clamp(int((tb.hi.y - layout.origin.y) / layout.spacing + 0.5), 0, n - 1);
      int k0 = std::clamp(int((tb.lo.z - layout.origin.z) / layout.spacing - 0.5), 0, n - 1);
      int k1 = std::clamp(int((tb.hi.z - layout.origin.z) / layout.spacing + 0.5), 0, n - 1);
      for (int k = k0; k <= k1; ++k)
        for (int j = j0; j <= j1; ++j) row_tris[std::size_t(k) * n + j].push_back(t);
    }
    parallel_for(std::size_t(n), [&](std::size_t kz) {
      int k = int(kz);
      std::vector<uint8_t> row(n);
      for (int j = 0; j < n; ++j) {
        parity_row(mesh, row_tris[std::size_t(k) * n + j], layout, j, k, row);
        for (int i = 0; i < n; ++i) inside[layout.index(i, j, k)] = row[i];
      }
    });
  }

  parallel_for(std::size_t(n), [&](std::size_t kz) {
    int k = int(kz);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        std::size_t s = layout.index(i, j, k);
        double d = bvh.distance(layout.cell_center(i, j, k));
        out.values[s] = inside[s] ? -d : d;
      }
  });
  return out;
}

SignedDistanceGrid voxelize(const TriangleMesh& mesh, int resolution, bool force,
                            SignMethod sign) {
  return voxelize_on(mesh, GridLayout::centered_unit(resolution), force, sign);
}

}  // namespace sfrec
