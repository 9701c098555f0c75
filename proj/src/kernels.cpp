#include "route_forge/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>

namespace route_forge::kernels {

namespace {

// Band around the chord threshold inside which the exact haversine test
// decides; outside it the chord comparison is unambiguous.
constexpr double kRelBand = 1e-6;
constexpr double kAbsBand = 1e-18;

void fill_row(std::span<const geo::GeoPoint> nodes, std::span<double> out, std::size_t i) {
  const auto n = nodes.size();
  double* row = out.data() + i * n;
  row[0] = 0.0;
  for (std::size_t j = 1; j < n; ++j) {
    row[j] = (i == j) ? 0.0 : geo::haversine_distance(nodes[i], nodes[j]);
  }
}

}  // namespace

void fill_distance_matrix(std::span<const geo::GeoPoint> nodes, std::span<double> out,
                          Execution exec) {
  const auto n = static_cast<std::ptrdiff_t>(nodes.size());
  if (exec == Execution::Serial) {
    for (std::ptrdiff_t i = 0; i < n; ++i) fill_row(nodes, out, static_cast<std::size_t>(i));
    return;
  }
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) fill_row(nodes, out, static_cast<std::size_t>(i));
}

NeighborIndex::NeighborIndex(std::span<const geo::GeoPoint> points, double radius_m)
    : points_(points), radius_m_(radius_m) {
  constexpr double kDegToRad = std::numbers::pi / 180.0;
  unit_.resize(points.size() * 3);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double lat = points[i].lat * kDegToRad;
    const double lon = points[i].lon * kDegToRad;
    unit_[3 * i] = std::cos(lat) * std::cos(lon);
    unit_[3 * i + 1] = std::cos(lat) * std::sin(lon);
    unit_[3 * i + 2] = std::sin(lat);
  }

  const double angle = radius_m / geo::kMetersPerRadian;
  if (angle >= std::numbers::pi) {
    everything_ = true;
    chord_sq_ = 4.0;
    return;
  }
  const double chord = 2.0 * std::sin(angle * 0.5);
  chord_sq_ = chord * chord;

  if (points.size() <= kBruteForceLimit) return;

  cell_size_ = chord * (1.0 + kRelBand) + 1e-9;
  std::vector<std::tuple<long long, long long, long long, std::size_t>> keyed;
  keyed.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    keyed.emplace_back(cell_coord(unit_[3 * i]), cell_coord(unit_[3 * i + 1]),
                       cell_coord(unit_[3 * i + 2]), i);
  }
  std::sort(keyed.begin(), keyed.end());
  cell_of_.resize(points.size());
  for (const auto& [x, y, z, i] : keyed) {
    if (cells_.empty() || cells_.back().x != x || cells_.back().y != y || cells_.back().z != z) {
      cells_.push_back({x, y, z, {}});
    }
    cells_.back().members.push_back(i);
    cell_of_[i] = cells_.size() - 1;
  }
}

long long NeighborIndex::cell_coord(double v) const noexcept {
  return static_cast<long long>(std::floor(v / cell_size_));
}

const NeighborIndex::Cell* NeighborIndex::find_cell(long long x, long long y,
                                                    long long z) const noexcept {
  auto it = std::lower_bound(cells_.begin(), cells_.end(), std::make_tuple(x, y, z),
                             [](const Cell& c, const std::tuple<long long, long long, long long>& k) {
                               return std::tie(c.x, c.y, c.z) < k;
                             });
  if (it == cells_.end() || it->x != x || it->y != y || it->z != z) return nullptr;
  return &*it;
}

bool NeighborIndex::within(std::size_t i, std::size_t j) const noexcept {
  if (i == j || everything_) return true;
  const double dx = unit_[3 * i] - unit_[3 * j];
  const double dy = unit_[3 * i + 1] - unit_[3 * j + 1];
  const double dz = unit_[3 * i + 2] - unit_[3 * j + 2];
  const double c2 = dx * dx + dy * dy + dz * dz;
  const double band = chord_sq_ * kRelBand + kAbsBand;
  if (c2 < chord_sq_ - band) return true;
  if (c2 > chord_sq_ + band) return false;
  return geo::haversine_distance(points_[i], points_[j]) <= radius_m_;
}

void NeighborIndex::query(std::size_t center, std::vector<std::size_t>& out) const {
  const auto start = out.size();
  if (cells_.empty()) {
    if (everything_) {
      for (std::size_t j = 0; j < points_.size(); ++j) out.push_back(j);
      return;
    }
    const double cx = unit_[3 * center];
    const double cy = unit_[3 * center + 1];
    const double cz = unit_[3 * center + 2];
    const double band = chord_sq_ * kRelBand + kAbsBand;
    const double lo = chord_sq_ - band;
    const double hi = chord_sq_ + band;
    const double* u = unit_.data();
    for (std::size_t j = 0; j < points_.size(); ++j, u += 3) {
      const double dx = cx - u[0];
      const double dy = cy - u[1];
      const double dz = cz - u[2];
      const double c2 = dx * dx + dy * dy + dz * dz;
      if (c2 > hi) continue;
      if (c2 < lo || j == center ||
          geo::haversine_distance(points_[center], points_[j]) <= radius_m_) {
        out.push_back(j);
      }
    }
    return;
  }
  const Cell& home = cells_[cell_of_[center]];
  for (long long dx = -1; dx <= 1; ++dx) {
    for (long long dy = -1; dy <= 1; ++dy) {
      for (long long dz = -1; dz <= 1; ++dz) {
        const Cell* cell = find_cell(home.x + dx, home.y + dy, home.z + dz);
        if (cell == nullptr) continue;
        for (const auto j : cell->members) {
          if (within(center, j)) out.push_back(j);
        }
      }
    }
  }
  std::sort(out.begin() + static_cast<std::ptrdiff_t>(start), out.end());
}

int NeighborIndex::components(std::vector<int>& labels) const {
  const auto n = points_.size();
  labels.assign(n, 0);
  if (n == 0) return 0;
  if (everything_) return 1;

  // Union-find rooted at the smallest index so roots order the components.
  std::vector<std::size_t> parent(n);
  for (std::size_t i = 0; i < n; ++i) parent[i] = i;
  auto find = [&](std::size_t i) {
    while (parent[i] != i) {
      parent[i] = parent[parent[i]];
      i = parent[i];
    }
    return i;
  };
  std::size_t count = n;
  auto link = [&](std::size_t i, std::size_t j) {
    const auto a = find(i);
    const auto b = find(j);
    if (a == b) return;
    parent[std::max(a, b)] = std::min(a, b);
    --count;
  };

  if (cells_.empty()) {
    const double band = chord_sq_ * kRelBand + kAbsBand;
    const double lo = chord_sq_ - band;
    const double hi = chord_sq_ + band;
    for (std::size_t i = 0; i + 1 < n && count > 1; ++i) {
      const double cx = unit_[3 * i];
      const double cy = unit_[3 * i + 1];
      const double cz = unit_[3 * i + 2];
      const double* u = unit_.data() + 3 * (i + 1);
      for (std::size_t j = i + 1; j < n; ++j, u += 3) {
        const double dx = cx - u[0];
        const double dy = cy - u[1];
        const double dz = cz - u[2];
        const double c2 = dx * dx + dy * dy + dz * dz;
        if (c2 > hi) continue;
        if (c2 < lo || geo::haversine_distance(points_[i], points_[j]) <= radius_m_) link(i, j);
      }
    }
  } else {
    for (std::size_t i = 0; i < n && count > 1; ++i) {
      const Cell& home = cells_[cell_of_[i]];
      for (long long dx = -1; dx <= 1; ++dx) {
        for (long long dy = -1; dy <= 1; ++dy) {
          for (long long dz = -1; dz <= 1; ++dz) {
            const Cell* cell = find_cell(home.x + dx, home.y + dy, home.z + dz);
            if (cell == nullptr) continue;
            for (const auto j : cell->members) {
              if (j > i && within(i, j)) link(i, j);
            }
          }
        }
      }
    }
  }

  int next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto root = find(i);
    labels[i] = root == i ? next++ : labels[root];
  }
  return next;
}

void batch_region_query(const NeighborIndex& index, std::span<const std::size_t> centers,
                        std::vector<std::vector<std::size_t>>& out, Execution exec) {
  out.resize(centers.size());
  const auto n = static_cast<std::ptrdiff_t>(centers.size());
  if (exec == Execution::Serial) {
    for (std::ptrdiff_t k = 0; k < n; ++k) {
      out[k].clear();
      index.query(centers[k], out[k]);
    }
    return;
  }
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    out[k].clear();
    index.query(centers[k], out[k]);
  }
}

}  // namespace route_forge::kernels
