#include "sfrec/seed.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "sfrec/rng.hpp"

namespace sfrec {

namespace {

double percentile_half_range(std::vector<double>& proj) {
  std::sort(proj.begin(), proj.end());
  auto at = [&](double q) {
    double idx = q * double(proj.size() - 1);
    std::size_t lo = std::size_t(idx);
    std::size_t hi = std::min(lo + 1, proj.size() - 1);
    double t = idx - double(lo);
    return proj[lo] * (1 - t) + proj[hi] * t;
  };
  return std::max(0.5 * (at(0.99) - at(0.01)), 1e-4);
}

}  // namespace

SeedEstimate estimate_seed(const std::vector<Vec3>& points) {
  if (points.size() < 16) throw std::invalid_argument("estimate_seed: needs >= 16 points");

  Vec3 mean{0, 0, 0};
  for (const auto& p : points) mean += p;
  mean = mean / double(points.size());

  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (const auto& p : points) {
    Eigen::Vector3d d(p.x - mean.x, p.y - mean.y, p.z - mean.z);
    cov += d * d.transpose();
  }
  cov /= double(points.size());

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
  // Descending eigenvalue order.
  Eigen::Vector3d evals = eig.eigenvalues().reverse();
  Eigen::Matrix3d evecs = eig.eigenvectors().rowwise().reverse();

  SeedEstimate est;
  est.center = mean;

  bool degenerate = evals(1) <= 1e-12;
  Vec3 axes[3];
  double lambda[3];
  if (degenerate) {
    // Rank-deficient covariance: fall back to the bounding-box frame.
    axes[0] = {1, 0, 0};
    axes[1] = {0, 1, 0};
    axes[2] = {0, 0, 1};
    Box3 box;
    for (const auto& p : points) box.expand(p);
    Vec3 ext = box.extent();
    lambda[0] = ext.x * ext.x;
    lambda[1] = ext.y * ext.y;
    lambda[2] = ext.z * ext.z;
  } else {
    for (int a = 0; a < 3; ++a) {
      axes[a] = {evecs(0, a), evecs(1, a), evecs(2, a)};
      lambda[a] = std::max(evals(a), 0.0);
    }
  }

  int best = 0;
  double best_score = -1;
  for (int a = 0; a < 3; ++a) {
    double lu = lambda[(a + 1) % 3], lv = lambda[(a + 2) % 3];
    double denom = lu + lv;
    est.cylindricity[a] = denom > 0 ? 1.0 - std::fabs(lu - lv) / denom : 0.0;
    // Ties resolved toward the larger-eigenvalue axis (lower index).
    if (est.cylindricity[a] > best_score + 1e-12) {
      best_score = est.cylindricity[a];
      best = a;
    }
  }

  est.axis = normalized(axes[best]);
  est.cross_u = normalized(axes[(best + 1) % 3]);
  // Right-handed frame with +z = axis.
  est.cross_v = normalized(cross(est.axis, est.cross_u));
  est.cross_u = normalized(cross(est.cross_v, est.axis));

  std::vector<double> proj(points.size());
  auto extent_along = [&](const Vec3& dir) {
    for (std::size_t i = 0; i < points.size(); ++i) proj[i] = dot(points[i] - mean, dir);
    return percentile_half_range(proj);
  };
  est.half_length = extent_along(est.axis);
  est.radial_extents[0] = extent_along(est.cross_u);
  est.radial_extents[1] = extent_along(est.cross_v);
  return est;
}

PosedPrimitive seed_primitive(const MsdRegion& region, const SeedEstimate& est) {
  PosedPrimitive prim;
  prim.params.sx = est.radial_extents[0];
  prim.params.sy = est.radial_extents[1];
  prim.params.sz = est.half_length;
  prim.params.r = 0.5;
  prim.params.d = 0;
  prim.params.t = 0;
  prim.params.b = 0;
  prim.params.o = 0;

  Mat3 rot = mat_from_columns(est.cross_u, est.cross_v, est.axis);
  prim.pose.rotation = quat_from_matrix(rot);
  prim.pose.translation = est.center;
  prim.blend = kBlendInit;
  prim.existence_logit = 2.0;
  (void)region;
  return prim;
}

std::vector<Vec3> region_points(const MsdRegion& region, std::size_t max_points, uint64_t seed) {
  const auto& mask = region.mask;
  const int n = mask.layout.resolution;
  std::vector<Vec3> pts;
  pts.reserve(std::min<std::size_t>(mask.count(), max_points * 2));
  std::size_t total = mask.count();
  if (total == 0) return pts;

  if (total <= max_points) {
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
          if (mask.at(i, j, k)) pts.push_back(mask.layout.cell_center(i, j, k));
    return pts;
  }

  // Deterministic thinning: keep each cell with probability max_points/total.
  Rng rng = Rng::stream(seed, 0xC0DE, region.order_index);
  double keep = double(max_points) / double(total);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        if (mask.at(i, j, k) && rng.uniform() < keep)
          pts.push_back(mask.layout.cell_center(i, j, k));
  if (pts.size() < 16)
    for (int k = 0; k < n && pts.size() < 16; ++k)
      for (int j = 0; j < n && pts.size() < 16; ++j)
        for (int i = 0; i < n && pts.size() < 16; ++i)
          if (mask.at(i, j, k)) pts.push_back(mask.layout.cell_center(i, j, k));
  return pts;
}

}  // namespace sfrec
