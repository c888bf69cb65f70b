#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "sfrec/assembly.hpp"
#include "sfrec/rng.hpp"

using namespace sfrec;

namespace {

PosedPrimitive make_sphere_prim(const Vec3& center, double radius, double logit = 10.0) {
  PosedPrimitive prim;
  prim.params = canonical_params(CanonicalKind::Sphere, {radius, radius, radius});
  prim.pose.translation = center;
  prim.existence_logit = logit;
  return prim;
}

}  // namespace

TEST_CASE("smooth union closed-form values and sandwich property") {
  CHECK(smooth_union(0.2, 0.2, 0.1) == doctest::Approx(0.2 - 0.1 / 4));
  CHECK(smooth_union(0.1, 0.5, 0.2) == doctest::Approx(0.1));
  CHECK(smooth_union(0.5, 0.1, 0.2) == doctest::Approx(0.1));

  Rng rng(11);
  for (int i = 0; i < 100000; ++i) {
    double a = rng.uniform(-1, 1), b = rng.uniform(-1, 1);
    double beta = rng.uniform(1e-4, 0.3);
    double u = smooth_union(a, b, beta);
    double m = std::min(a, b);
    CHECK(u <= m + 1e-12);
    CHECK(u >= m - beta / 4 - 1e-12);
    if (std::fabs(a - b) >= beta) CHECK(u == m);
  }
}

TEST_CASE("smooth union gradients match finite differences") {
  Rng rng(12);
  const double h = 1e-6;
  for (int i = 0; i < 2000; ++i) {
    double a = rng.uniform(-1, 1), b = rng.uniform(-1, 1);
    double beta = rng.uniform(0.01, 0.3);
    if (std::fabs(std::fabs(a - b) - beta) < 1e-3) continue;  // clamp seam
    SmoothUnionGrad g = smooth_union_grad(a, b, beta);
    CHECK(g.value == doctest::Approx(smooth_union(a, b, beta)));
    double fda = (smooth_union(a + h, b, beta) - smooth_union(a - h, b, beta)) / (2 * h);
    double fdb = (smooth_union(a, b + h, beta) - smooth_union(a, b - h, beta)) / (2 * h);
    double fdbeta = (smooth_union(a, b, beta + h) - smooth_union(a, b, beta - h)) / (2 * h);
    CHECK(g.da == doctest::Approx(fda).epsilon(1e-4));
    CHECK(g.db == doctest::Approx(fdb).epsilon(1e-4));
    CHECK(g.dbeta == doctest::Approx(fdbeta).epsilon(1e-4));
  }
}

TEST_CASE("field evaluation: single primitive, disjoint union, dead weight limit") {
  Assembly z;
  z.primitives.push_back(make_sphere_prim({0.3, 0, 0}, 0.2));
  // Single primitive in training mode with q ~ 1 equals its own SDF.
  Rng rng(13);
  for (int i = 0; i < 500; ++i) {
    Vec3 p = rng.uniform_in_box({-1, -1, -1}, {1, 1, 1});
    double f = z.eval_field(p, FieldMode::Training);
    CHECK(std::fabs(f - oracle::sd_sphere(p - Vec3{0.3, 0, 0}, 0.2)) <= 1e-4);
  }

  z.primitives.push_back(make_sphere_prim({-0.4, 0, 0}, 0.15));
  CHECK(z.eval_field({0.3, 0, 0}, FieldMode::Hard) == doctest::Approx(-0.2).epsilon(1e-5));

  // Existence -> 0 converges to the assembly without that primitive. The
  // modulation pushes the dead field to the constant +1, which caps the union
  // far outside, so the limit holds wherever the field sits below that cap.
  Assembly with_dead = z;
  with_dead.primitives.push_back(make_sphere_prim({0, 0.25, 0}, 0.1, -12.0));
  double beta_max = 0;
  for (const auto& prim : with_dead.primitives) beta_max = std::max(beta_max, prim.blend);
  for (int i = 0; i < 500; ++i) {
    Vec3 p = rng.uniform_in_box({-1, -1, -1}, {1, 1, 1});
    double without = z.eval_field(p, FieldMode::Training);
    if (without > 0.9) continue;
    double with_soft = with_dead.eval_field(p, FieldMode::Training);
    CHECK(std::fabs(with_soft - without) <= beta_max + 1e-3);
  }
}

TEST_CASE("empty assembly evaluates to +infinity with zero occupancy") {
  Assembly z;
  CHECK(std::isinf(z.eval_field({0, 0, 0})));
  CHECK(z.occupancy({0, 0, 0}) == 0.0);
}

TEST_CASE("occupancy logistic of the field") {
  Assembly z;
  z.primitives.push_back(make_sphere_prim({0, 0, 0}, 0.3));
  z.beta_occ = 64.0;
  // F = 0 on the surface -> 0.5.
  CHECK(z.occupancy({0.3, 0, 0}) == doctest::Approx(0.5).epsilon(1e-3));
  // Deep inside: sigmoid(10) and monotone with depth.
  Vec3 inside{0, 0, 0};
  double f_deep = z.eval_field(inside);
  CHECK(z.occupancy(inside) == doctest::Approx(sigmoid(-64.0 * f_deep)));
  CHECK(z.occupancy({0.1, 0, 0}) > z.occupancy({0.25, 0, 0}));
}

TEST_CASE("hard mode equals removal of dead primitives exactly") {
  Assembly z;
  z.primitives.push_back(make_sphere_prim({0.2, 0, 0}, 0.25));
  z.primitives.push_back(make_sphere_prim({-0.2, 0, 0}, 0.2, -3.0));  // dead
  z.primitives.push_back(make_sphere_prim({0, 0.3, 0}, 0.15));
  Assembly filtered = z.hard_filtered();
  CHECK(filtered.size() == 2);
  Rng rng(14);
  for (int i = 0; i < 2000; ++i) {
    Vec3 p = rng.uniform_in_box({-1, -1, -1}, {1, 1, 1});
    CHECK(z.eval_field(p, FieldMode::Hard) == filtered.eval_field(p, FieldMode::Hard));
  }
}

TEST_CASE("fold respects accumulated smooth-min bounds") {
  Rng rng(15);
  for (int trial = 0; trial < 50; ++trial) {
    Assembly z;
    int n = 2 + int(rng.uniform_index(5));
    for (int i = 0; i < n; ++i) {
      PosedPrimitive prim = make_sphere_prim(rng.uniform_in_box({-0.4, -0.4, -0.4}, {0.4, 0.4, 0.4}),
                                             rng.uniform(0.05, 0.3));
      prim.blend = rng.uniform(kBlendMin, kBlendMax);
      z.primitives.push_back(prim);
    }
    for (int i = 0; i < 200; ++i) {
      Vec3 p = rng.uniform_in_box({-1, -1, -1}, {1, 1, 1});
      double field = z.eval_field(p, FieldMode::Hard);
      double min_g = 1e30, beta_sum = 0;
      for (std::size_t k = 0; k < z.primitives.size(); ++k) {
        min_g = std::min(min_g, z.primitives[k].eval(p));
        if (k > 0) beta_sum += z.primitives[k].blend;
      }
      CHECK(field <= min_g + 1e-12);
      CHECK(field >= min_g - beta_sum / 4 - 1e-12);
    }
  }
}

TEST_CASE("rigid invariance: rotating pose and query together is exact") {
  Rng rng(16);
  for (int trial = 0; trial < 200; ++trial) {
    PosedPrimitive prim;
    prim.params = {rng.uniform(0.05, 0.3), rng.uniform(0.05, 0.3), rng.uniform(0.05, 0.3),
                   rng.uniform(0, 1),      rng.uniform(0, 0.1),    rng.uniform(-0.5, 0.9),
                   rng.uniform(-0.8, 0.8), 0.0};
    prim.pose.rotation = rng.random_rotation();
    prim.pose.translation = rng.uniform_in_box({-0.3, -0.3, -0.3}, {0.3, 0.3, 0.3});

    Quat extra = rng.random_rotation();
    Mat3 re = quat_to_matrix(extra);
    PosedPrimitive rotated = prim;
    rotated.pose.rotation = quat_mul(extra, prim.pose.rotation);
    rotated.pose.translation = re * prim.pose.translation;

    Vec3 p = rng.uniform_in_box({-0.8, -0.8, -0.8}, {0.8, 0.8, 0.8});
    CHECK(std::fabs(prim.eval(p) - rotated.eval(re * p)) <= 1e-12);
  }
}

TEST_CASE("serialization round trips the field exactly") {
  Rng rng(17);
  Assembly z;
  for (int i = 0; i < 4; ++i) {
    PosedPrimitive prim;
    prim.params = {rng.uniform(0.05, 0.3), rng.uniform(0.05, 0.3), rng.uniform(0.05, 0.3),
                   rng.uniform(0, 1),      rng.uniform(0, 0.1),    rng.uniform(-0.5, 0.9),
                   rng.uniform(-0.8, 0.8), rng.uniform() < 0.5 ? 0.0 : 0.05};
    prim.pose.rotation = rng.random_rotation();
    prim.pose.translation = rng.uniform_in_box({-0.3, -0.3, -0.3}, {0.3, 0.3, 0.3});
    prim.blend = rng.uniform(kBlendMin, kBlendMax);
    prim.existence_logit = rng.uniform(-4, 4);
    z.primitives.push_back(prim);
  }
  Assembly back = deserialize(serialize(z));
  REQUIRE(back.size() == z.size());
  for (int i = 0; i < 1000; ++i) {
    Vec3 p = rng.uniform_in_box({-1, -1, -1}, {1, 1, 1});
    CHECK(std::fabs(z.eval_field(p, FieldMode::Training) -
                    back.eval_field(p, FieldMode::Training)) <= 1e-12);
  }

  Assembly empty;
  Assembly empty_back = deserialize(serialize(empty));
  CHECK(empty_back.size() == 0);

  CHECK_THROWS_WITH_AS(deserialize(R"({"version":1,"primitives":[]})"),
                       doctest::Contains("beta_occ"), std::runtime_error);
  CHECK_THROWS_WITH_AS(
      deserialize(
          R"({"version":1,"beta_occ":64,"primitives":[{"pose":{"quat":[1,0,0,0],"t":[0,0,0]},"blend":0.01,"existence":2}]})"),
      doctest::Contains("params"), std::runtime_error);
  CHECK_THROWS(deserialize(R"({"version":99,"beta_occ":64,"primitives":[]})"));
}
