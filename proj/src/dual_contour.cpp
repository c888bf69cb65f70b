#include "sfrec/dual_contour.hpp"

#include <cmath>
#include <unordered_map>

#include "sfrec/parallel.hpp"

namespace sfrec {

namespace {

Vec3 field_gradient(const ScalarField& field, const Vec3& p, double h) {
  return {(field({p.x + h, p.y, p.z}) - field({p.x - h, p.y, p.z})) / (2 * h),
          (field({p.x, p.y + h, p.z}) - field({p.x, p.y - h, p.z})) / (2 * h),
          (field({p.x, p.y, p.z + h}) - field({p.x, p.y, p.z - h})) / (2 * h)};
}

// Edge crossing refined by bisection (the sampled field may be nonlinear
// between lattice points).
Vec3 edge_crossing(const ScalarField& field, double iso, Vec3 a, Vec3 b, double fa, double fb) {
  for (int it = 0; it < 12; ++it) {
    Vec3 mid = (a + b) * 0.5;
    double fm = field(mid) - iso;
    if ((fm <= 0) == (fa <= 0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
      fb = fm;
    }
  }
  double t = fa == fb ? 0.5 : fa / (fa - fb);
  return a + (b - a) * std::clamp(t, 0.0, 1.0);
}

struct Qef {
  // Normal equations of sum (n . (x - p))^2 plus mass-point regularization.
  double a[3][3] = {};
  double rhs[3] = {};
  Vec3 mass{0, 0, 0};
  int count = 0;

  void add(const Vec3& p, const Vec3& n) {
    const double nv[3] = {n.x, n.y, n.z};
    double nd = n.x * p.x + n.y * p.y + n.z * p.z;
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) a[r][c] += nv[r] * nv[c];
      rhs[r] += nv[r] * nd;
    }
    mass += p;
    ++count;
  }

  Vec3 solve(double regularization) const {
    Vec3 m = mass / double(count);
    double A[3][3];
    double B[3];
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) A[r][c] = a[r][c] + (r == c ? regularization : 0.0);
      B[r] = rhs[r] + regularization * (r == 0 ? m.x : (r == 1 ? m.y : m.z));
    }
    // Cramer's rule on the 3x3 system.
    auto det3 = [](const double M[3][3]) {
      return M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1]) -
             M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0]) +
             M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]);
    };
    double det = det3(A);
    if (std::fabs(det) < 1e-12) return m;
    Vec3 x;
    for (int col = 0; col < 3; ++col) {
      double M[3][3];
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) M[r][c] = c == col ? B[r] : A[r][c];
      x[col] = det3(M) / det;
    }
    return x;
  }
};

}  // namespace

TriangleMesh extract_surface(const ScalarField& field, double iso, const GridLayout& layout) {
  const int n = layout.resolution;
  TriangleMesh mesh;

  // Sample the field at cell centers; those samples form the primal lattice.
  std::vector<double> values(layout.cell_count());
  parallel_for(std::size_t(n), [&](std::size_t kz) {
    int k = int(kz);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        values[layout.index(i, j, k)] = field(layout.cell_center(i, j, k)) - iso;
  });

  const double h = layout.spacing;
  const double grad_h = 0.25 * h;
  auto sample = [&](int i, int j, int k) { return values[layout.index(i, j, k)]; };

  // One vertex per dual cell that has a sign-changing edge.
  std::unordered_map<std::size_t, int> cell_vertex;
  auto cell_key = [&](int i, int j, int k) {
    return (std::size_t(k) * n + j) * n + i;
  };

  auto cell_vertex_index = [&](int i, int j, int k) -> int {
    std::size_t key = cell_key(i, j, k);
    auto it = cell_vertex.find(key);
    if (it != cell_vertex.end()) return it->second;

    Qef qef;
    static const int corner[8][3] = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0},
                                     {0, 0, 1}, {1, 0, 1}, {0, 1, 1}, {1, 1, 1}};
    static const int edges[12][2] = {{0, 1}, {2, 3}, {4, 5}, {6, 7}, {0, 2}, {1, 3},
                                     {4, 6}, {5, 7}, {0, 4}, {1, 5}, {2, 6}, {3, 7}};
    double fv[8];
    Vec3 pv[8];
    for (int c = 0; c < 8; ++c) {
      int ci = i + corner[c][0], cj = j + corner[c][1], ck = k + corner[c][2];
      fv[c] = sample(ci, cj, ck);
      pv[c] = layout.cell_center(ci, cj, ck);
    }
    for (const auto& e : edges) {
      double fa = fv[e[0]], fb = fv[e[1]];
      if ((fa <= 0) == (fb <= 0)) continue;
      Vec3 x = edge_crossing(field, iso, pv[e[0]], pv[e[1]], fa, fb);
      Vec3 g = normalized(field_gradient(field, x, grad_h));
      if (length2(g) > 0.5) qef.add(x, g);
    }
    Vec3 v;
    if (qef.count == 0) {
      v = (pv[0] + pv[7]) * 0.5;
    } else {
      v = qef.solve(1e-3 * qef.count);
      // Keep the vertex inside its cell.
      v = cwise_min(cwise_max(v, pv[0]), pv[7]);
    }
    int idx = int(mesh.vertices.size());
    mesh.vertices.push_back(v);
    cell_vertex.emplace(key, idx);
    return idx;
  };

  auto emit_quad = [&](int v0, int v1, int v2, int v3, bool flip) {
    if (flip) {
      mesh.triangles.push_back({v0, v2, v1});
      mesh.triangles.push_back({v0, v3, v2});
    } else {
      mesh.triangles.push_back({v0, v1, v2});
      mesh.triangles.push_back({v0, v2, v3});
    }
  };

  // Sweep the three edge orientations; each sign-changing edge connects the
  // vertices of the four cells around it.
  for (int k = 1; k < n - 1; ++k)
    for (int j = 1; j < n - 1; ++j)
      for (int i = 1; i < n - 1; ++i) {
        double f0 = sample(i, j, k);
        if (i + 1 < n - 1) {
          double f1 = sample(i + 1, j, k);
          if ((f0 <= 0) != (f1 <= 0)) {
            int v0 = cell_vertex_index(i, j - 1, k - 1);
            int v1 = cell_vertex_index(i, j, k - 1);
            int v2 = cell_vertex_index(i, j, k);
            int v3 = cell_vertex_index(i, j - 1, k);
            emit_quad(v0, v1, v2, v3, f0 > 0);
          }
        }
        if (j + 1 < n - 1) {
          double f1 = sample(i, j + 1, k);
          if ((f0 <= 0) != (f1 <= 0)) {
            int v0 = cell_vertex_index(i - 1, j, k - 1);
            int v1 = cell_vertex_index(i - 1, j, k);
            int v2 = cell_vertex_index(i, j, k);
            int v3 = cell_vertex_index(i, j, k - 1);
            emit_quad(v0, v1, v2, v3, f0 > 0);
          }
        }
        if (k + 1 < n - 1) {
          double f1 = sample(i, j, k + 1);
          if ((f0 <= 0) != (f1 <= 0)) {
            int v0 = cell_vertex_index(i - 1, j - 1, k);
            int v1 = cell_vertex_index(i, j - 1, k);
            int v2 = cell_vertex_index(i, j, k);
            int v3 = cell_vertex_index(i - 1, j, k);
            emit_quad(v0, v1, v2, v3, f0 > 0);
          }
        }
      }

  finalize_mesh(mesh);
  return mesh;
}

TriangleMesh extract_surface(const SignedDistanceGrid& grid, double iso) {
  return extract_surface([&grid](const Vec3& p) { return grid.sample(p); }, iso, grid.layout);
}

TriangleMesh extract_surface(const SignedDistanceGrid& grid, double iso, int resolution) {
  return extract_surface([&grid](const Vec3& p) { return grid.sample(p); }, iso,
                         GridLayout::centered_unit(resolution));
}

}  // namespace sfrec
