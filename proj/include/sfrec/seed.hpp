#pragma once

#include <vector>

#include "sfrec/assembly.hpp"
#include "sfrec/msd.hpp"
#include "sfrec/vec.hpp"

namespace sfrec {

struct SeedEstimate {
  Vec3 axis{0, 0, 1};            // canonical +z direction, unit norm
  Vec3 cross_u{1, 0, 0};         // remaining frame axes
  Vec3 cross_v{0, 1, 0};
  Vec3 center{0, 0, 0};
  double half_length = 0.1;      // robust extent along axis
  double radial_extents[2] = {0.1, 0.1};
  double cylindricity[3] = {0, 0, 0};  // per PCA axis, descending eigenvalue order
};

// PCA of interior points. The canonical axis is the PCA direction whose
// orthogonal cross-section is most isotropic:
//   cylindricity(a) = 1 - |l_u - l_v| / (l_u + l_v)
// over the two remaining eigenvalues; ties go to the larger-eigenvalue axis.
// Extents are 1st-99th percentile half-ranges. Throws if fewer than 16 points.
SeedEstimate estimate_seed(const std::vector<Vec3>& points);

// One primitive per region: pose maps canonical +z onto the estimated axis,
// scale from the extents, starting half-round (r = 0.5) and solid.
PosedPrimitive seed_primitive(const MsdRegion& region, const SeedEstimate& estimate);

// Interior cell centers of a region mask (deterministic order), subsampled to
// at most max_points by seeded reservoir choice when needed.
std::vector<Vec3> region_points(const MsdRegion& region, std::size_t max_points, uint64_t seed);

}  // namespace sfrec
