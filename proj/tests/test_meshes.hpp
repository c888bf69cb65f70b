#pragma once

// Watertight procedural meshes for the test suites.

#include <array>
#include <cmath>
#include <map>
#include <vector>

#include "sfrec/mesh.hpp"

namespace testmesh {

using sfrec::TriangleMesh;
using sfrec::Vec3;

inline TriangleMesh icosphere(const Vec3& center, double radius, int subdivisions = 3) {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> verts = {
      {-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0},
      {0, -1, phi}, {0, 1, phi}, {0, -1, -phi}, {0, 1, -phi},
      {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1}};
  for (auto& v : verts) v = sfrec::normalized(v);
  std::vector<std::array<int, 3>> faces = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
      {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
      {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
      {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};

  for (int s = 0; s < subdivisions; ++s) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      int idx = int(verts.size());
      verts.push_back(sfrec::normalized((verts[a] + verts[b]) * 0.5));
      midpoint.emplace(key, idx);
      return idx;
    };
    std::vector<std::array<int, 3>> next;
    for (const auto& f : faces) {
      int ab = mid(f[0], f[1]), bc = mid(f[1], f[2]), ca = mid(f[2], f[0]);
      next.push_back({f[0], ab, ca});
      next.push_back({f[1], bc, ab});
      next.push_back({f[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    faces = std::move(next);
  }

  TriangleMesh mesh;
  for (const auto& v : verts) mesh.vertices.push_back(center + v * radius);
  mesh.triangles = faces;
  sfrec::finalize_mesh(mesh);
  return mesh;
}

inline TriangleMesh box(const Vec3& center, const Vec3& half) {
  TriangleMesh mesh;
  for (int c = 0; c < 8; ++c)
    mesh.vertices.push_back(center + Vec3{(c & 1) ? half.x : -half.x, (c & 2) ? half.y : -half.y,
                                          (c & 4) ? half.z : -half.z});
  auto quad = [&mesh](int a, int b, int c, int d) {
    mesh.triangles.push_back({a, b, c});
    mesh.triangles.push_back({a, c, d});
  };
  quad(0, 2, 3, 1);  // -z
  quad(4, 5, 7, 6);  // +z
  quad(0, 1, 5, 4);  // -y
  quad(2, 6, 7, 3);  // +y
  quad(0, 4, 6, 2);  // -x
  quad(1, 3, 7, 5);  // +x
  sfrec::finalize_mesh(mesh);
  return mesh;
}

inline TriangleMesh cylinder(const Vec3& center, double radius, double half_height,
                             int segments = 48) {
  TriangleMesh mesh;
  int top_center = 0, bottom_center = 1;
  mesh.vertices.push_back(center + Vec3{0, 0, half_height});
  mesh.vertices.push_back(center + Vec3{0, 0, -half_height});
  for (int s = 0; s < segments; ++s) {
    double a = 2.0 * M_PI * s / segments;
    Vec3 rim{radius * std::cos(a), radius * std::sin(a), 0};
    mesh.vertices.push_back(center + rim + Vec3{0, 0, half_height});
    mesh.vertices.push_back(center + rim + Vec3{0, 0, -half_height});
  }
  for (int s = 0; s < segments; ++s) {
    int s2 = (s + 1) % segments;
    int vt = 2 + 2 * s, vb = 3 + 2 * s;
    int wt = 2 + 2 * s2, wb = 3 + 2 * s2;
    mesh.triangles.push_back({top_center, vt, wt});
    mesh.triangles.push_back({bottom_center, wb, vb});
    mesh.triangles.push_back({vt, vb, wb});
    mesh.triangles.push_back({vt, wb, wt});
  }
  sfrec::finalize_mesh(mesh);
  return mesh;
}

// Open (non-watertight) square patch.
inline TriangleMesh open_plane() {
  TriangleMesh mesh;
  mesh.vertices = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}};
  mesh.triangles = {{0, 1, 2}, {0, 2, 3}};
  sfrec::finalize_mesh(mesh);
  return mesh;
}

}  // namespace testmesh
