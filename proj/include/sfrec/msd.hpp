#pragma once

#include <optional>
#include <vector>

#include "sfrec/grid.hpp"

namespace sfrec {

// One extracted region: the eroded core that survived thresholding at tau and
// its dilation back by |tau|.
struct MsdRegion {
  BinaryGrid mask;       // R = core dilated by |tau|
  BinaryGrid core_mask;  // largest component of {f <= tau}
  double tau = 0;        // erosion threshold (<= 0)
  int order_index = 0;
  double volume = 0;     // mask volume, world units^3
};

struct MsdConfig {
  double volume_fraction = 0.05;  // of the current residual
  int max_iterations = 7;
  std::size_t min_region_voxels = 32;
  int connectivity = 26;
};

struct ThickestCore {
  BinaryGrid core;
  double tau;
};

// Deepest erosion threshold whose largest connected component still holds the
// requested fraction of the residual volume. Search runs over the distinct
// negative values present in the field (every achievable threshold on the
// lattice), restricted to tau >= tau_floor. Returns nullopt when the residual
// is exhausted.
std::optional<ThickestCore> find_thickest(const SignedDistanceGrid& field, const MsdConfig& cfg,
                                          double tau_floor = -1e30);

// Core dilated by the Euclidean ball of world radius |tau|.
BinaryGrid dilate_core(const BinaryGrid& core, double radius);

// Removes the region from the field: residual occupancy is re-signed by a
// fresh distance transform so later iterations see a clean field.
SignedDistanceGrid subtract_region(const SignedDistanceGrid& field, const BinaryGrid& region);

// Iterated peel-thickest-first decomposition; regions come back ordered by
// extraction (non-increasing |tau|).
std::vector<MsdRegion> decompose(const SignedDistanceGrid& field, const MsdConfig& cfg);

}  // namespace sfrec
