#pragma once

#include <functional>

#include "sfrec/grid.hpp"
#include "sfrec/mesh.hpp"

namespace sfrec {

using ScalarField = std::function<double(const Vec3&)>;

// Dual contouring of the iso level set sampled on the given lattice. Cell
// vertices minimize a regularized quadric of the edge-crossing planes, which
// preserves sharp features; gradients come from central differences. Returns
// an empty mesh when the level set is not crossed.
TriangleMesh extract_surface(const ScalarField& field, double iso, const GridLayout& layout);

// Convenience overloads: trilinear interpolation of a stored grid, either on
// its own lattice or at another resolution.
TriangleMesh extract_surface(const SignedDistanceGrid& grid, double iso = 0.0);
TriangleMesh extract_surface(const SignedDistanceGrid& grid, double iso, int resolution);

}  // namespace sfrec
