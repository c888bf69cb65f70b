#include "sfrec/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sfrec/parallel.hpp"

namespace sfrec {

void GridLayout::locate(const Vec3& p, int& i, int& j, int& k) const {
  auto clamp_idx = [this](double t) {
    return std::clamp(int(std::floor(t)), 0, resolution - 1);
  };
  i = clamp_idx((p.x - origin.x) / spacing);
  j = clamp_idx((p.y - origin.y) / spacing);
  k = clamp_idx((p.z - origin.z) / spacing);
}

bool GridLayout::same_as(const GridLayout& o) const {
  return resolution == o.resolution && spacing == o.spacing && origin.x == o.origin.x &&
         origin.y == o.origin.y && origin.z == o.origin.z;
}

GridLayout GridLayout::centered_unit(int resolution) {
  if (resolution < 16) throw std::invalid_argument("grid resolution must be >= 16");
  GridLayout g;
  g.resolution = resolution;
  g.spacing = 1.0 / double(resolution - 8);
  double extent = g.spacing * resolution;
  g.origin = {-extent / 2, -extent / 2, -extent / 2};
  return g;
}

std::size_t BinaryGrid::count() const {
  std::size_t n = 0;
  for (uint8_t b : bits) n += b;
  return n;
}

BinaryGrid BinaryGrid::and_not(const BinaryGrid& other) const {
  BinaryGrid out{layout, bits};
  for (std::size_t i = 0; i < bits.size(); ++i) out.bits[i] = bits[i] && !other.bits[i];
  return out;
}

BinaryGrid BinaryGrid::intersect(const BinaryGrid& other) const {
  BinaryGrid out{layout, bits};
  for (std::size_t i = 0; i < bits.size(); ++i) out.bits[i] = bits[i] && other.bits[i];
  return out;
}

double SignedDistanceGrid::sample(const Vec3& p) const {
  const int n = layout.resolution;
  double fx = (p.x - layout.origin.x) / layout.spacing - 0.5;
  double fy = (p.y - layout.origin.y) / layout.spacing - 0.5;
  double fz = (p.z - layout.origin.z) / layout.spacing - 0.5;
  int i0 = std::clamp(int(std::floor(fx)), 0, n - 2);
  int j0 = std::clamp(int(std::floor(fy)), 0, n - 2);
  int k0 = std::clamp(int(std::floor(fz)), 0, n - 2);
  double tx = std::clamp(fx - i0, 0.0, 1.0);
  double ty = std::clamp(fy - j0, 0.0, 1.0);
  double tz = std::clamp(fz - k0, 0.0, 1.0);
  auto v = [&](int di, int dj, int dk) { return at(i0 + di, j0 + dj, k0 + dk); };
  double c00 = v(0, 0, 0) * (1 - tx) + v(1, 0, 0) * tx;
  double c10 = v(0, 1, 0) * (1 - tx) + v(1, 1, 0) * tx;
  double c01 = v(0, 0, 1) * (1 - tx) + v(1, 0, 1) * tx;
  double c11 = v(0, 1, 1) * (1 - tx) + v(1, 1, 1) * tx;
  double c0 = c00 * (1 - ty) + c10 * ty;
  double c1 = c01 * (1 - ty) + c11 * ty;
  return c0 * (1 - tz) + c1 * tz;
}

BinaryGrid SignedDistanceGrid::threshold(double tau) const {
  BinaryGrid out = BinaryGrid::zeros(layout);
  for (std::size_t i = 0; i < values.size(); ++i) out.bits[i] = values[i] <= tau ? 1 : 0;
  return out;
}

double SignedDistanceGrid::min_value() const {
  return *std::min_element(values.begin(), values.end());
}
double SignedDistanceGrid::max_value() const {
  return *std::max_element(values.begin(), values.end());
}

std::size_t SignedDistanceGrid::inside_count() const {
  std::size_t n = 0;
  for (double v : values) n += v <= 0 ? 1 : 0;
  return n;
}

SignedDistanceGrid rasterize_field(const GridLayout& layout,
                                   const std::function<double(const Vec3&)>& fn) {
  SignedDistanceGrid g = SignedDistanceGrid::filled(layout, 0.0);
  const int n = layout.resolution;
  parallel_for(std::size_t(n), [&](std::size_t k) {
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        g.values[layout.index(i, j, int(k))] = fn(layout.cell_center(i, j, int(k)));
  });
  return g;
}

namespace {

// Large finite sentinel; parabolas at this height never shape the lower
// envelope inside the lattice, so the textbook recurrence needs no special
// casing for empty rows.
constexpr double kInf = 1e20;

// 1D squared-distance lower envelope over one row.
void edt_1d(const double* f, double* d, int n, int* v, double* z) {
  int k = 0;
  v[0] = 0;
  z[0] = -kInf;
  z[1] = kInf;
  for (int q = 1; q < n; ++q) {
    double s = ((f[q] + double(q) * q) - (f[v[k]] + double(v[k]) * v[k])) /
               (2.0 * q - 2.0 * v[k]);
    while (s <= z[k]) {
      --k;
      s = ((f[q] + double(q) * q) - (f[v[k]] + double(v[k]) * v[k])) /
          (2.0 * q - 2.0 * v[k]);
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = kInf;
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    double dq = double(q) - v[k];
    d[q] = dq * dq + f[v[k]];
  }
}

}  // namespace

std::vector<double> squared_distance_cells(const BinaryGrid& sites) {
  const int n = sites.layout.resolution;
  std::vector<double> dist(sites.bits.size());
  for (std::size_t i = 0; i < dist.size(); ++i) dist[i] = sites.bits[i] ? 0.0 : kInf;

  // Pass along x rows, then y, then z columns.
  auto idx = [&](int i, int j, int k) { return sites.layout.index(i, j, k); };

  parallel_for(std::size_t(n), [&](std::size_t kz) {
    std::vector<double> f(n), d(n), z(n + 1);
    std::vector<int> v(n);
    int k = int(kz);
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) f[i] = dist[idx(i, j, k)];
      edt_1d(f.data(), d.data(), n, v.data(), z.data());
      for (int i = 0; i < n; ++i) dist[idx(i, j, k)] = d[i];
    }
  });
  parallel_for(std::size_t(n), [&](std::size_t kz) {
    std::vector<double> f(n), d(n), z(n + 1);
    std::vector<int> v(n);
    int k = int(kz);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) f[j] = dist[idx(i, j, k)];
      edt_1d(f.data(), d.data(), n, v.data(), z.data());
      for (int j = 0; j < n; ++j) dist[idx(i, j, k)] = d[j];
    }
  });
  parallel_for(std::size_t(n), [&](std::size_t jy) {
    std::vector<double> f(n), d(n), z(n + 1);
    std::vector<int> v(n);
    int j = int(jy);
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < n; ++k) f[k] = dist[idx(i, j, k)];
      edt_1d(f.data(), d.data(), n, v.data(), z.data());
      for (int k = 0; k < n; ++k) dist[idx(i, j, k)] = d[k];
    }
  });
  return dist;
}

SignedDistanceGrid signed_distance_field(const BinaryGrid& occ, bool* degenerate) {
  std::size_t inside = occ.count();
  std::size_t total = occ.bits.size();
  if (degenerate) *degenerate = (inside == 0 || inside == total);

  SignedDistanceGrid out = SignedDistanceGrid::filled(occ.layout, 0.0);
  const double h = occ.layout.spacing;
  const double far = occ.layout.resolution * h * 4.0;

  if (inside == 0) {
    std::fill(out.values.begin(), out.values.end(), far);
    return out;
  }
  if (inside == total) {
    std::fill(out.values.begin(), out.values.end(), -far);
    return out;
  }

  BinaryGrid outside = occ;
  for (std::size_t i = 0; i < total; ++i) outside.bits[i] = occ.bits[i] ? 0 : 1;

  std::vector<double> to_inside = squared_distance_cells(occ);
  std::vector<double> to_outside = squared_distance_cells(outside);
  for (std::size_t i = 0; i < total; ++i) {
    out.values[i] =
        occ.bits[i] ? -h * std::sqrt(to_outside[i]) : h * std::sqrt(to_inside[i]);
  }
  return out;
}

ComponentLabels connected_components(const BinaryGrid& occ, int connectivity) {
  if (connectivity != 6 && connectivity != 26)
    throw std::invalid_argument("connectivity must be 6 or 26");
  const int n = occ.layout.resolution;
  ComponentLabels out;
  out.labels.assign(occ.bits.size(), 0);

  // Neighbor offsets.
  std::vector<std::array<int, 3>> nbr;
  for (int dz = -1; dz <= 1; ++dz)
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        if (dx == 0 && dy == 0 && dz == 0) continue;
        int manh = std::abs(dx) + std::abs(dy) + std::abs(dz);
        if (connectivity == 6 && manh != 1) continue;
        nbr.push_back({dx, dy, dz});
      }

  std::vector<std::size_t> stack;
  int32_t next_label = 0;
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        std::size_t s = occ.layout.index(i, j, k);
        if (!occ.bits[s] || out.labels[s] != 0) continue;
        ++next_label;
        std::size_t size = 0;
        stack.clear();
        stack.push_back(s);
        out.labels[s] = next_label;
        while (!stack.empty()) {
          std::size_t cur = stack.back();
          stack.pop_back();
          ++size;
          int ci = int(cur % n), cj = int((cur / n) % n), ck = int(cur / (std::size_t(n) * n));
          for (const auto& d : nbr) {
            int ni = ci + d[0], nj = cj + d[1], nk = ck + d[2];
            if (!occ.layout.contains(ni, nj, nk)) continue;
            std::size_t t = occ.layout.index(ni, nj, nk);
            if (occ.bits[t] && out.labels[t] == 0) {
              out.labels[t] = next_label;
              stack.push_back(t);
            }
          }
        }
        out.sizes.push_back(size);
      }

  out.sizes_sorted = out.sizes;
  std::sort(out.sizes_sorted.rbegin(), out.sizes_sorted.rend());
  return out;
}

}  // namespace sfrec
