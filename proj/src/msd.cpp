#include "sfrec/msd.hpp"

#include <algorithm>
#include <cmath>

namespace sfrec {

namespace {

// Largest component of {f <= tau}; ties broken by lowest seed voxel index so
// decompositions are deterministic.
BinaryGrid largest_component(const SignedDistanceGrid& field, double tau, int connectivity,
                             std::size_t* size_out) {
  BinaryGrid thresh = field.threshold(tau);
  ComponentLabels cc = connected_components(thresh, connectivity);
  BinaryGrid out = BinaryGrid::zeros(field.layout);
  if (cc.count() == 0) {
    if (size_out) *size_out = 0;
    return out;
  }
  int best = 0;
  for (int c = 1; c < cc.count(); ++c)
    if (cc.sizes[c] > cc.sizes[best]) best = c;  // first max wins: lowest seed index
  int32_t label = best + 1;
  for (std::size_t i = 0; i < out.bits.size(); ++i) out.bits[i] = cc.labels[i] == label ? 1 : 0;
  if (size_out) *size_out = cc.sizes[best];
  return out;
}

}  // namespace

std::optional<ThickestCore> find_thickest(const SignedDistanceGrid& field, const MsdConfig& cfg,
                                          double tau_floor) {
  std::size_t inside = field.inside_count();
  if (inside < cfg.min_region_voxels) return std::nullopt;

  // Candidate thresholds: distinct negative values present, deepest first.
  std::vector<double> taus;
  taus.reserve(inside);
  for (double v : field.values)
    if (v <= 0 && v >= tau_floor) taus.push_back(v);
  if (taus.empty()) return std::nullopt;
  std::sort(taus.begin(), taus.end());
  taus.erase(std::unique(taus.begin(), taus.end()), taus.end());

  const double needed = cfg.volume_fraction * double(inside);

  // The largest-component volume is monotone non-decreasing in tau, so the
  // deepest feasible threshold is found by binary search.
  auto feasible = [&](double tau) {
    std::size_t size = 0;
    largest_component(field, tau, cfg.connectivity, &size);
    return double(size) >= needed;
  };

  std::size_t lo = 0, hi = taus.size() - 1;
  if (!feasible(taus[hi])) return std::nullopt;  // not even tau ~ 0 works
  if (feasible(taus[lo])) {
    hi = lo;
  } else {
    // Invariant: taus[lo] infeasible, taus[hi] feasible.
    while (hi - lo > 1) {
      std::size_t mid = (lo + hi) / 2;
      (feasible(taus[mid]) ? hi : lo) = mid;
    }
  }

  ThickestCore result{BinaryGrid::zeros(field.layout), taus[hi]};
  std::size_t size = 0;
  result.core = largest_component(field, taus[hi], cfg.connectivity, &size);
  if (size == 0) return std::nullopt;
  return result;
}

BinaryGrid dilate_core(const BinaryGrid& core, double radius) {
  if (radius <= 0) return core;
  std::vector<double> d2 = squared_distance_cells(core);
  BinaryGrid out = BinaryGrid::zeros(core.layout);
  double r_cells = radius / core.layout.spacing;
  double r2 = r_cells * r_cells * (1.0 + 1e-12);
  for (std::size_t i = 0; i < out.bits.size(); ++i) out.bits[i] = d2[i] <= r2 ? 1 : 0;
  return out;
}

SignedDistanceGrid subtract_region(const SignedDistanceGrid& field, const BinaryGrid& region) {
  BinaryGrid residual = field.threshold(0.0).and_not(region);
  return signed_distance_field(residual);
}

std::vector<MsdRegion> decompose(const SignedDistanceGrid& field, const MsdConfig& cfg) {
  std::vector<MsdRegion> regions;
  SignedDistanceGrid residual = field;
  double tau_floor = -1e30;
  int order = 0;
  for (int it = 0; it < cfg.max_iterations; ++it) {
    auto core = find_thickest(residual, cfg, tau_floor);
    if (!core) break;
    // Never erode deeper than the previous round; keeps |tau| non-increasing.
    tau_floor = core->tau;

    MsdRegion region;
    region.core_mask = core->core;
    region.tau = core->tau;
    region.mask = dilate_core(core->core, -core->tau);
    // Clip to the residual shape: dilation may not spill into carved space.
    region.mask = region.mask.intersect(residual.threshold(0.0));
    region.volume = region.mask.volume();

    residual = subtract_region(residual, region.mask);

    if (region.mask.count() >= cfg.min_region_voxels) {
      region.order_index = order++;
      regions.push_back(std::move(region));
    }
  }
  return regions;
}

}  // namespace sfrec
