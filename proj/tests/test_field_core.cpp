#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "oracles.hpp"
#include "sfrec/dual.hpp"
#include "sfrec/dual_contour.hpp"
#include "sfrec/grid.hpp"
#include "sfrec/io.hpp"
#include "sfrec/mesh.hpp"
#include "sfrec/sample.hpp"
#include "sfrec/voxelize.hpp"
#include "test_meshes.hpp"

using namespace sfrec;

TEST_CASE("normalize_mesh centers and scales to unit longest side") {
  TriangleMesh cube = testmesh::box({7.3, -2.1, 0.4}, {1.0, 1.0, 1.0});
  NormalizeTransform tf = normalize_mesh(cube);
  Box3 box = cube.bounding_box();
  CHECK(box.longest_side() == doctest::Approx(1.0));
  CHECK(length(box.center()) <= 1e-12);
  // Round trip through the inverse transform.
  Vec3 p = cube.vertices[3];
  Vec3 back = tf.invert(p);
  Vec3 again = tf.apply(back);
  CHECK(length(again - p) <= 1e-12);

  // Asymmetric bbox (0,0,0)-(2,1,1): scale 1/2 after centering at (1, .5, .5).
  TriangleMesh slab = testmesh::box({1.0, 0.5, 0.5}, {1.0, 0.5, 0.5});
  NormalizeTransform tf2 = normalize_mesh(slab);
  CHECK(tf2.scale == doctest::Approx(0.5));
  CHECK(tf2.center.x == doctest::Approx(1.0));
  CHECK(tf2.center.y == doctest::Approx(0.5));

  TriangleMesh empty;
  CHECK_THROWS(normalize_mesh(empty));

  // Already-normalized mesh: identity transform.
  TriangleMesh unit = testmesh::box({0, 0, 0}, {0.5, 0.5, 0.5});
  NormalizeTransform tf3 = normalize_mesh(unit);
  CHECK(tf3.scale == doctest::Approx(1.0));
  CHECK(length(tf3.center) <= 1e-12);
}

TEST_CASE("voxelize: unit cube center value and sphere oracle") {
  TriangleMesh cube = testmesh::box({0, 0, 0}, {0.5, 0.5, 0.5});
  SignedDistanceGrid grid = voxelize(cube, 64);
  int c = 32;
  CHECK(grid.at(c, c, c) <= -0.5 + 2 * grid.layout.spacing);
  CHECK(grid.at(c, c, c) >= -0.5 - 2 * grid.layout.spacing);

  TriangleMesh sph = testmesh::icosphere({0, 0, 0}, 0.4, 3);
  SignedDistanceGrid sg = voxelize(sph, 64);
  double max_err = 0;
  for (int k = 0; k < 64; k += 3)
    for (int j = 0; j < 64; j += 3)
      for (int i = 0; i < 64; i += 3) {
        Vec3 p = sg.layout.cell_center(i, j, k);
        max_err = std::max(max_err, std::fabs(sg.at(i, j, k) - oracle::sd_sphere(p, 0.4)));
      }
  // Allowance: mesh facets approximate the sphere from inside.
  CHECK(max_err <= 1.5 * sg.layout.spacing + 0.4 * 0.01);
}

TEST_CASE("voxelize rejects open meshes unless forced") {
  TriangleMesh plane = testmesh::open_plane();
  CHECK(!plane.watertight);
  CHECK_THROWS(voxelize(plane, 32));
  CHECK_NOTHROW(voxelize(plane, 32, true));
}

TEST_CASE("winding and parity sign methods agree on a sphere") {
  TriangleMesh sph = testmesh::icosphere({0.02, -0.01, 0.03}, 0.35, 2);
  SignedDistanceGrid a = voxelize(sph, 48, false, SignMethod::WindingNumber);
  SignedDistanceGrid b = voxelize(sph, 48, false, SignMethod::RayParity);
  std::size_t disagreements = 0;
  for (std::size_t i = 0; i < a.values.size(); ++i)
    if ((a.values[i] <= 0) != (b.values[i] <= 0)) ++disagreements;
  CHECK(disagreements <= a.values.size() / 1000);
}

TEST_CASE("distance transform: single voxel, ball, and degenerate grids") {
  GridLayout layout = GridLayout::centered_unit(32);
  BinaryGrid occ = BinaryGrid::zeros(layout);
  occ.set(16, 16, 16, true);
  SignedDistanceGrid sdf = signed_distance_field(occ);
  CHECK(sdf.at(17, 16, 16) == doctest::Approx(layout.spacing));
  CHECK(sdf.at(16, 16, 16) < 0);

  // Solid ball of 10-cell radius: center depth ~ 10 spacings.
  GridLayout bl = GridLayout::centered_unit(48);
  BinaryGrid ball = BinaryGrid::zeros(bl);
  double radius = 10 * bl.spacing;
  for (int k = 0; k < 48; ++k)
    for (int j = 0; j < 48; ++j)
      for (int i = 0; i < 48; ++i)
        ball.set(i, j, k, length(bl.cell_center(i, j, k)) <= radius);
  SignedDistanceGrid bsdf = signed_distance_field(ball);
  CHECK(std::fabs(bsdf.at(24, 24, 24) + radius) <= 1.001 * bl.spacing);

  bool degenerate = false;
  BinaryGrid empty = BinaryGrid::zeros(layout);
  SignedDistanceGrid esdf = signed_distance_field(empty, &degenerate);
  CHECK(degenerate);
  CHECK(esdf.min_value() > 0);

  BinaryGrid full = BinaryGrid::zeros(layout);
  std::fill(full.bits.begin(), full.bits.end(), 1);
  SignedDistanceGrid fsdf = signed_distance_field(full, &degenerate);
  CHECK(degenerate);
  CHECK(fsdf.max_value() < 0);
}

TEST_CASE("distance transform thresholds back to the input occupancy") {
  GridLayout layout = GridLayout::centered_unit(32);
  Rng rng(42);
  BinaryGrid occ = BinaryGrid::zeros(layout);
  // Random blobby occupancy.
  for (int trial = 0; trial < 6; ++trial) {
    Vec3 c = rng.uniform_in_box({-0.3, -0.3, -0.3}, {0.3, 0.3, 0.3});
    double r = rng.uniform(0.05, 0.2);
    for (int k = 0; k < 32; ++k)
      for (int j = 0; j < 32; ++j)
        for (int i = 0; i < 32; ++i)
          if (length(layout.cell_center(i, j, k) - c) <= r) occ.set(i, j, k, true);
  }
  SignedDistanceGrid sdf = signed_distance_field(occ);
  BinaryGrid back = sdf.threshold(0.0);
  CHECK(back.bits == occ.bits);
}

TEST_CASE("connected components: counts, connectivity, partition") {
  GridLayout layout = GridLayout::centered_unit(24);
  BinaryGrid occ = BinaryGrid::zeros(layout);
  // Two disjoint blocks.
  for (int k = 2; k < 6; ++k)
    for (int j = 2; j < 6; ++j)
      for (int i = 2; i < 6; ++i) occ.set(i, j, k, true);
  for (int k = 12; k < 16; ++k)
    for (int j = 12; j < 16; ++j)
      for (int i = 12; i < 16; ++i) occ.set(i, j, k, true);
  ComponentLabels cc = connected_components(occ, 26);
  CHECK(cc.count() == 2);
  std::size_t total = 0;
  for (auto s : cc.sizes) total += s;
  CHECK(total == occ.count());

  // Corner-touching voxels: separate under 6, joined under 26.
  BinaryGrid corner = BinaryGrid::zeros(layout);
  corner.set(8, 8, 8, true);
  corner.set(9, 9, 9, true);
  CHECK(connected_components(corner, 6).count() == 2);
  CHECK(connected_components(corner, 26).count() == 1);

  BinaryGrid empty = BinaryGrid::zeros(layout);
  CHECK(connected_components(empty, 26).count() == 0);
}

TEST_CASE("dual contouring: sphere area, empty set, cube corners, watertight") {
  GridLayout layout = GridLayout::centered_unit(64);
  auto sphere_field = [](const Vec3& p) { return oracle::sd_sphere(p, 0.4); };
  TriangleMesh mesh = extract_surface(sphere_field, 0.0, layout);
  CHECK(!mesh.empty());
  CHECK(mesh.watertight);
  double want_area = 4.0 * M_PI * 0.4 * 0.4;
  CHECK(std::fabs(mesh.area() - want_area) / want_area <= 0.05);
  double want_vol = 4.0 / 3.0 * M_PI * 0.4 * 0.4 * 0.4;
  CHECK(std::fabs(mesh.volume() - want_vol) / want_vol <= 0.05);

  // Outward orientation: signed volume is positive.
  double signed_vol = 0;
  for (const auto& tri : mesh.triangles)
    signed_vol +=
        dot(mesh.vertices[tri[0]], cross(mesh.vertices[tri[1]], mesh.vertices[tri[2]])) / 6.0;
  CHECK(signed_vol > 0);

  auto positive = [](const Vec3&) { return 1.0; };
  CHECK(extract_surface(positive, 0.0, layout).empty());

  auto box_field = [](const Vec3& p) { return oracle::sd_box(p, {0.3, 0.3, 0.3}); };
  TriangleMesh boxm = extract_surface(box_field, 0.0, layout);
  // Each analytic corner has a mesh vertex within one spacing.
  for (int c = 0; c < 8; ++c) {
    Vec3 corner{(c & 1) ? 0.3 : -0.3, (c & 2) ? 0.3 : -0.3, (c & 4) ? 0.3 : -0.3};
    double best = 1e9;
    for (const auto& v : boxm.vertices) best = std::min(best, length(v - corner));
    CHECK(best <= layout.spacing);
  }
}

TEST_CASE("surface of a voxelized convex mesh preserves volume within 5%") {
  TriangleMesh cube = testmesh::box({0, 0, 0}, {0.5, 0.35, 0.25});
  SignedDistanceGrid grid = voxelize(cube, 128);
  TriangleMesh back = extract_surface(grid, 0.0);
  CHECK(std::fabs(back.volume() - cube.volume()) / cube.volume() <= 0.05);
}

TEST_CASE("curvature: sphere uniform, cube faces flat, edges sharper") {
  TriangleMesh sph = testmesh::icosphere({0, 0, 0}, 0.4, 3);
  auto kappa = estimate_curvature(sph);
  double diag = sph.bounding_box().diagonal();
  double want = (1.0 / 0.4) * diag;
  double mean = 0;
  for (double k : kappa) mean += k;
  mean /= double(kappa.size());
  CHECK(std::fabs(mean - want) / want <= 0.2);
  for (double k : kappa) CHECK(std::fabs(k - want) / want <= 0.2);

  // Cube subdivided so faces have interior vertices.
  GridLayout layout = GridLayout::centered_unit(48);
  TriangleMesh cube =
      extract_surface([](const Vec3& p) { return oracle::sd_box(p, {0.35, 0.35, 0.35}); }, 0.0,
                      layout);
  auto ck = estimate_curvature(cube);
  double face_interior = -1, edge_like = -1;
  for (int v = 0; v < int(cube.vertices.size()); ++v) {
    const Vec3& p = cube.vertices[v];
    int at_face = (std::fabs(std::fabs(p.x) - 0.35) < 0.02) +
                  (std::fabs(std::fabs(p.y) - 0.35) < 0.02) +
                  (std::fabs(std::fabs(p.z) - 0.35) < 0.02);
    bool interior_patch = std::fabs(std::fabs(p.x) - 0.35) < 0.02 && std::fabs(p.y) < 0.15 &&
                          std::fabs(p.z) < 0.15;
    if (at_face == 1 && interior_patch) face_interior = std::max(face_interior, ck[v]);
    if (at_face >= 2) edge_like = std::max(edge_like, ck[v]);
  }
  REQUIRE(face_interior >= 0);
  REQUIRE(edge_like >= 0);
  CHECK(face_interior <= 0.35);  // flat region, dimensionless units
  CHECK(edge_like > face_interior);
}

TEST_CASE("sample_points: occupancy fraction, weights, surface band") {
  TriangleMesh sph = testmesh::icosphere({0, 0, 0}, 0.4, 3);
  estimate_curvature(sph);
  SignedDistanceGrid grid = voxelize(sph, 64);
  Rng rng(7);
  PointSet pts = sample_points(sph, grid, 10000, 2000, rng);
  REQUIRE(pts.points.size() == 12000);

  double inside = 0;
  for (std::size_t i = 0; i < 10000; ++i) inside += pts.points[i].target_occupancy;
  double extent = grid.layout.spacing * grid.layout.resolution;
  double expect = (4.0 / 3.0 * M_PI * 0.4 * 0.4 * 0.4) / (extent * extent * extent);
  double sigma = std::sqrt(expect * (1 - expect) / 10000.0);
  CHECK(std::fabs(inside / 10000.0 - expect) <= 3 * sigma + 0.01);

  for (const auto& p : pts.points) {
    CHECK(p.weight > 1.0);
    CHECK(p.weight < 2.0);
  }

  std::size_t in_band = 0;
  for (std::size_t i = 10000; i < pts.points.size(); ++i)
    if (std::fabs(grid.sample(pts.points[i].position)) <= 2.0 * grid.layout.spacing + 1e-9)
      ++in_band;
  CHECK(double(in_band) / 2000.0 >= 0.99);
}

TEST_CASE("mesh and grid files round trip") {
  TriangleMesh sph = testmesh::icosphere({0, 0, 0}, 0.3, 2);
  save_obj(sph, "roundtrip.obj");
  TriangleMesh back = load_mesh("roundtrip.obj");
  CHECK(back.vertices.size() == sph.vertices.size());
  CHECK(back.triangles.size() == sph.triangles.size());
  CHECK(back.watertight);

  save_stl(sph, "roundtrip.stl", true);
  TriangleMesh stl_back = load_mesh("roundtrip.stl");
  CHECK(stl_back.triangles.size() == sph.triangles.size());
  CHECK(stl_back.watertight);

  save_stl(sph, "roundtrip_ascii.stl", false);
  TriangleMesh ascii_back = load_mesh("roundtrip_ascii.stl");
  CHECK(ascii_back.triangles.size() == sph.triangles.size());

  SignedDistanceGrid grid = voxelize(sph, 32);
  save_grid(grid, "roundtrip.sdf");
  SignedDistanceGrid gback = load_grid("roundtrip.sdf");
  CHECK(gback.layout.same_as(grid.layout));
  CHECK(gback.values == grid.values);

  std::remove("roundtrip.obj");
  std::remove("roundtrip.stl");
  std::remove("roundtrip_ascii.stl");
  std::remove("roundtrip.sdf");
}

TEST_CASE("config text parses and round trips") {
  ConfigMap cfg = parse_config_text("alpha = 0.001\n# comment\nrounds=10\n bad line\n");
  CHECK(cfg.at("alpha") == "0.001");
  CHECK(cfg.at("rounds") == "10");
  CHECK(cfg.size() == 2);
  save_config(cfg, "roundtrip.cfg");
  ConfigMap back = load_config("roundtrip.cfg");
  CHECK(back == cfg);
  std::remove("roundtrip.cfg");
}
