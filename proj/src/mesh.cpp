#include "sfrec/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>

#include <Eigen/Dense>

namespace sfrec {

Box3 TriangleMesh::bounding_box() const {
  Box3 b;
  for (const auto& v : vertices) b.expand(v);
  return b;
}

Vec3 TriangleMesh::triangle_normal(int t) const {
  const auto& tri = triangles[t];
  Vec3 n = cross(vertices[tri[1]] - vertices[tri[0]], vertices[tri[2]] - vertices[tri[0]]);
  return normalized(n);
}

double TriangleMesh::triangle_area(int t) const {
  const auto& tri = triangles[t];
  return 0.5 * length(cross(vertices[tri[1]] - vertices[tri[0]],
                            vertices[tri[2]] - vertices[tri[0]]));
}

double TriangleMesh::area() const {
  double a = 0;
  for (int t = 0; t < int(triangles.size()); ++t) a += triangle_area(t);
  return a;
}

double TriangleMesh::volume() const {
  double v = 0;
  for (const auto& tri : triangles) {
    const Vec3& a = vertices[tri[0]];
    const Vec3& b = vertices[tri[1]];
    const Vec3& c = vertices[tri[2]];
    v += dot(a, cross(b, c)) / 6.0;
  }
  return std::fabs(v);
}

void finalize_mesh(TriangleMesh& mesh) {
  const int nv = int(mesh.vertices.size());
  std::vector<std::array<int, 3>> kept;
  kept.reserve(mesh.triangles.size());
  for (const auto& tri : mesh.triangles) {
    for (int idx : tri)
      if (idx < 0 || idx >= nv) throw std::runtime_error("mesh: triangle index out of range");
    Vec3 n = cross(mesh.vertices[tri[1]] - mesh.vertices[tri[0]],
                   mesh.vertices[tri[2]] - mesh.vertices[tri[0]]);
    if (0.5 * length(n) > 1e-12) kept.push_back(tri);
  }
  mesh.triangles = std::move(kept);

  // Watertight: every undirected edge appears exactly twice.
  std::map<std::pair<int, int>, int> edge_count;
  for (const auto& tri : mesh.triangles)
    for (int e = 0; e < 3; ++e) {
      int a = tri[e], b = tri[(e + 1) % 3];
      edge_count[{std::min(a, b), std::max(a, b)}]++;
    }
  mesh.watertight = !mesh.triangles.empty();
  for (const auto& [edge, count] : edge_count)
    if (count != 2) {
      mesh.watertight = false;
      break;
    }
}

NormalizeTransform normalize_mesh(TriangleMesh& mesh) {
  if (mesh.empty()) throw std::runtime_error("normalize_mesh: empty mesh");
  Box3 box = mesh.bounding_box();
  NormalizeTransform tf;
  tf.center = box.center();
  double longest = box.longest_side();
  tf.scale = longest > 0 ? 1.0 / longest : 1.0;
  for (auto& v : mesh.vertices) v = tf.apply(v);
  return tf;
}

std::vector<double> estimate_curvature(TriangleMesh& mesh) {
  const int nv = int(mesh.vertices.size());
  std::vector<double> kappa(nv, 0.0);
  if (mesh.empty()) {
    mesh.curvature = kappa;
    return kappa;
  }

  // Vertex adjacency and area-weighted normals.
  std::vector<std::vector<int>> adj(nv);
  std::vector<Vec3> normals(nv, {0, 0, 0});
  for (int t = 0; t < int(mesh.triangles.size()); ++t) {
    const auto& tri = mesh.triangles[t];
    Vec3 n = cross(mesh.vertices[tri[1]] - mesh.vertices[tri[0]],
                   mesh.vertices[tri[2]] - mesh.vertices[tri[0]]);
    for (int e = 0; e < 3; ++e) {
      adj[tri[e]].push_back(tri[(e + 1) % 3]);
      adj[tri[e]].push_back(tri[(e + 2) % 3]);
      normals[tri[e]] += n;
    }
  }
  for (auto& a : adj) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }

  const double diag = mesh.bounding_box().diagonal();

  for (int v = 0; v < nv; ++v) {
    if (adj[v].empty()) continue;  // isolated vertex

    // 2-ring neighborhood.
    std::set<int> ring(adj[v].begin(), adj[v].end());
    for (int u : adj[v]) ring.insert(adj[u].begin(), adj[u].end());
    ring.erase(v);
    if (ring.size() < 5) continue;

    Vec3 n = normalized(normals[v]);
    if (length2(n) < 0.5) continue;
    // Tangent frame.
    Vec3 e1 = cross(n, std::fabs(n.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0});
    e1 = normalized(e1);
    Vec3 e2 = cross(n, e1);

    // Fit h(x,y) = 1/2 (a x^2 + 2 b x y + c y^2) + d x + e y.
    Eigen::MatrixXd A(ring.size(), 5);
    Eigen::VectorXd rhs(ring.size());
    int row = 0;
    for (int u : ring) {
      Vec3 delta = mesh.vertices[u] - mesh.vertices[v];
      double x = dot(delta, e1), y = dot(delta, e2), h = dot(delta, n);
      A(row, 0) = 0.5 * x * x;
      A(row, 1) = x * y;
      A(row, 2) = 0.5 * y * y;
      A(row, 3) = x;
      A(row, 4) = y;
      rhs(row) = h;
      ++row;
    }
    Eigen::VectorXd sol =
        (A.transpose() * A + 1e-12 * Eigen::MatrixXd::Identity(5, 5)).ldlt().solve(
            A.transpose() * rhs);
    double a = sol(0), b = sol(1), c = sol(2);
    // Principal curvatures = eigenvalues of [[a, b], [b, c]].
    double mean = 0.5 * (a + c);
    double delta = std::sqrt(std::max(0.0, 0.25 * (a - c) * (a - c) + b * b));
    kappa[v] = std::max(std::fabs(mean + delta), std::fabs(mean - delta)) * diag;
  }

  mesh.curvature = kappa;
  return kappa;
}

std::vector<SurfaceSample> sample_surface(const TriangleMesh& mesh, std::size_t count, Rng& rng) {
  std::vector<SurfaceSample> samples;
  if (mesh.empty() || count == 0) return samples;

  std::vector<double> cum(mesh.triangles.size());
  double acc = 0;
  for (int t = 0; t < int(mesh.triangles.size()); ++t) {
    acc += mesh.triangle_area(t);
    cum[t] = acc;
  }
  if (acc <= 0) return samples;

  samples.reserve(count);
  bool has_curv = mesh.curvature.size() == mesh.vertices.size();
  for (std::size_t s = 0; s < count; ++s) {
    double u = rng.uniform() * acc;
    int t = int(std::lower_bound(cum.begin(), cum.end(), u) - cum.begin());
    t = std::min(t, int(mesh.triangles.size()) - 1);
    const auto& tri = mesh.triangles[t];
    double r1 = std::sqrt(rng.uniform()), r2 = rng.uniform();
    double w0 = 1.0 - r1, w1 = r1 * (1.0 - r2), w2 = r1 * r2;
    SurfaceSample smp;
    smp.position = mesh.vertices[tri[0]] * w0 + mesh.vertices[tri[1]] * w1 +
                   mesh.vertices[tri[2]] * w2;
    smp.normal = mesh.triangle_normal(t);
    smp.curvature = has_curv ? mesh.curvature[tri[0]] * w0 + mesh.curvature[tri[1]] * w1 +
                                   mesh.curvature[tri[2]] * w2
                             : 0.0;
    samples.push_back(smp);
  }
  return samples;
}

VertexLocator::VertexLocator(const TriangleMesh& mesh) : mesh_(mesh) {
  box_ = mesh.bounding_box();
  if (box_.empty()) return;
  int n = std::max(1, int(std::cbrt(double(mesh.vertices.size()) / 4.0)));
  Vec3 ext = box_.extent();
  double longest = std::max({ext.x, ext.y, ext.z, 1e-12});
  cell_ = longest / n;
  for (int a = 0; a < 3; ++a)
    dims_[a] = std::max(1, int(std::ceil(ext[a] / cell_)) + 1);
  bins_.assign(std::size_t(dims_[0]) * dims_[1] * dims_[2], {});
  for (int v = 0; v < int(mesh.vertices.size()); ++v) {
    Vec3 rel = mesh.vertices[v] - box_.lo;
    int i = std::clamp(int(rel.x / cell_), 0, dims_[0] - 1);
    int j = std::clamp(int(rel.y / cell_), 0, dims_[1] - 1);
    int k = std::clamp(int(rel.z / cell_), 0, dims_[2] - 1);
    bins_[bin_of(i, j, k)].push_back(v);
  }
}

int VertexLocator::nearest(const Vec3& p) const {
  if (mesh_.vertices.empty()) return -1;
  Vec3 rel = p - box_.lo;
  int ci = std::clamp(int(rel.x / cell_), 0, dims_[0] - 1);
  int cj = std::clamp(int(rel.y / cell_), 0, dims_[1] - 1);
  int ck = std::clamp(int(rel.z / cell_), 0, dims_[2] - 1);

  int best = -1;
  double best_d2 = std::numeric_limits<double>::max();
  int max_ring = std::max({dims_[0], dims_[1], dims_[2]});
  for (int ring = 0; ring <= max_ring; ++ring) {
    // Once a hit exists, one extra ring guarantees correctness.
    for (int k = std::max(0, ck - ring); k <= std::min(dims_[2] - 1, ck + ring); ++k)
      for (int j = std::max(0, cj - ring); j <= std::min(dims_[1] - 1, cj + ring); ++j)
        for (int i = std::max(0, ci - ring); i <= std::min(dims_[0] - 1, ci + ring); ++i) {
          if (ring > 0 && std::abs(i - ci) != ring && std::abs(j - cj) != ring &&
              std::abs(k - ck) != ring)
            continue;  // interior cells already visited
          for (int v : bins_[bin_of(i, j, k)]) {
            double d2 = length2(mesh_.vertices[v] - p);
            if (d2 < best_d2) {
              best_d2 = d2;
              best = v;
            }
          }
        }
    if (best >= 0 && double(ring) * cell_ > std::sqrt(best_d2)) break;
  }
  return best;
}

}  // namespace sfrec
