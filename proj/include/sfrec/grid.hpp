#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "sfrec/vec.hpp"

namespace sfrec {

// Cubic lattice shared by all grid types. Cell (i, j, k) is centered at
// origin + spacing * (i + 1/2, j + 1/2, k + 1/2); storage is x-fastest.
struct GridLayout {
  int resolution = 0;
  Vec3 origin{0, 0, 0};
  double spacing = 0;

  std::size_t cell_count() const {
    return std::size_t(resolution) * resolution * resolution;
  }
  std::size_t index(int i, int j, int k) const {
    return (std::size_t(k) * resolution + j) * resolution + i;
  }
  Vec3 cell_center(int i, int j, int k) const {
    return {origin.x + spacing * (i + 0.5), origin.y + spacing * (j + 0.5),
            origin.z + spacing * (k + 0.5)};
  }
  bool contains(int i, int j, int k) const {
    return i >= 0 && j >= 0 && k >= 0 && i < resolution && j < resolution && k < resolution;
  }
  // Nearest cell of a world position, clamped to the lattice.
  void locate(const Vec3& p, int& i, int& j, int& k) const;
  bool same_as(const GridLayout& o) const;

  // Lattice framing the normalized unit shape with a 4-cell margin per side.
  static GridLayout centered_unit(int resolution);
};

struct BinaryGrid {
  GridLayout layout;
  std::vector<uint8_t> bits;

  static BinaryGrid zeros(const GridLayout& layout) {
    return {layout, std::vector<uint8_t>(layout.cell_count(), 0)};
  }
  bool at(int i, int j, int k) const { return bits[layout.index(i, j, k)] != 0; }
  void set(int i, int j, int k, bool v) { bits[layout.index(i, j, k)] = v ? 1 : 0; }
  std::size_t count() const;
  double volume() const {
    return double(count()) * layout.spacing * layout.spacing * layout.spacing;
  }

  BinaryGrid and_not(const BinaryGrid& other) const;
  BinaryGrid intersect(const BinaryGrid& other) const;
};

struct SignedDistanceGrid {
  GridLayout layout;
  std::vector<double> values;

  static SignedDistanceGrid filled(const GridLayout& layout, double v) {
    return {layout, std::vector<double>(layout.cell_count(), v)};
  }
  double at(int i, int j, int k) const { return values[layout.index(i, j, k)]; }
  double& at(int i, int j, int k) { return values[layout.index(i, j, k)]; }

  // Trilinear interpolation of cell-center values, clamped at the border.
  double sample(const Vec3& p) const;

  BinaryGrid threshold(double tau = 0.0) const;  // value <= tau
  double min_value() const;
  double max_value() const;
  std::size_t inside_count() const;
};

// Evaluates fn at every cell center (parallel over z-slabs).
SignedDistanceGrid rasterize_field(const GridLayout& layout,
                                   const std::function<double(const Vec3&)>& fn);

// Exact Euclidean signed distance to the occupancy boundary: negative inside
// with magnitude = distance to the nearest outside cell center, positive
// outside likewise. Thresholding the result at 0 reproduces the input.
// `degenerate` (optional) is set when the grid is all-empty or all-full.
SignedDistanceGrid signed_distance_field(const BinaryGrid& occ, bool* degenerate = nullptr);

// Unsigned squared Euclidean cell-center distances to the nearest set bit, in
// cell units (Felzenszwalb-Huttenlocher separable passes).
std::vector<double> squared_distance_cells(const BinaryGrid& sites);

struct ComponentLabels {
  std::vector<int32_t> labels;              // 0 = background, 1..C = components
  std::vector<std::size_t> sizes;           // sizes[c-1] = voxels of component c
  std::vector<std::size_t> sizes_sorted;    // descending
  int count() const { return int(sizes.size()); }
};

ComponentLabels connected_components(const BinaryGrid& occ, int connectivity = 26);

}  // namespace sfrec
