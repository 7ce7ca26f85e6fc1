#include "lwa/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "lwa/errors.hpp"

namespace lwa {

namespace {

void check_geometry(const GridGeometry& g) {
  if (g.width < 1 || g.height < 1) {
    throw std::invalid_argument("grid dimensions must be at least 1x1");
  }
  if (!(g.resolution > 0.0)) {
    throw std::invalid_argument("grid resolution must be positive");
  }
}

constexpr std::int64_t kInfSq = std::numeric_limits<std::int64_t>::max();

// 1D squared distance transform over the lower envelope of parabolas rooted
// at the finite entries of `f` (Felzenszwalb & Huttenlocher). Entries equal
// to kInfSq are not sites. If no site exists every output is kInfSq.
void edt_1d(const std::int64_t* f, std::size_t stride, int n, std::int64_t* out,
            std::size_t out_stride, std::vector<int>& v, std::vector<double>& z) {
  int k = -1;
  for (int q = 0; q < n; ++q) {
    const std::int64_t fq = f[static_cast<std::size_t>(q) * stride];
    if (fq == kInfSq) continue;
    const double hq = static_cast<double>(fq) + static_cast<double>(q) * q;
    double s = -std::numeric_limits<double>::infinity();
    while (k >= 0) {
      const int p = v[k];
      const double hp = static_cast<double>(f[static_cast<std::size_t>(p) * stride]) +
                        static_cast<double>(p) * p;
      s = (hq - hp) / (2.0 * (q - p));
      if (s > z[k]) break;
      --k;
    }
    ++k;
    v[k] = q;
    z[k] = k == 0 ? -std::numeric_limits<double>::infinity() : s;
    z[k + 1] = std::numeric_limits<double>::infinity();
  }
  if (k < 0) {
    for (int q = 0; q < n; ++q) out[static_cast<std::size_t>(q) * out_stride] = kInfSq;
    return;
  }
  int j = 0;
  for (int q = 0; q < n; ++q) {
    while (z[j + 1] < q) ++j;
    const std::int64_t dq = q - v[j];
    out[static_cast<std::size_t>(q) * out_stride] =
        dq * dq + f[static_cast<std::size_t>(v[j]) * stride];
  }
}

// Squared distance (in cells) from each cell to the nearest cell where
// `is_site` holds.
std::vector<std::int64_t> squared_edt(const BooleanGrid& grid, bool site_value) {
  const int w = grid.width();
  const int h = grid.height();
  const auto& cells = grid.cells();
  std::vector<std::int64_t> f(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    f[i] = ((cells[i] != 0) == site_value) ? 0 : kInfSq;
  }
  std::vector<std::int64_t> cols(cells.size());
  std::vector<std::int64_t> out(cells.size());
  const int n = std::max(w, h);
  std::vector<int> v(static_cast<std::size_t>(n));
  std::vector<double> z(static_cast<std::size_t>(n) + 1);
  // Columns (along rows index), then rows.
  for (int c = 0; c < w; ++c) {
    edt_1d(f.data() + c, static_cast<std::size_t>(w), h, cols.data() + c,
           static_cast<std::size_t>(w), v, z);
  }
  for (int r = 0; r < h; ++r) {
    const std::size_t base = static_cast<std::size_t>(r) * static_cast<std::size_t>(w);
    edt_1d(cols.data() + base, 1, w, out.data() + base, 1, v, z);
  }
  return out;
}

}  // namespace

OccupancyGrid::OccupancyGrid(const GridGeometry& geometry, std::int8_t fill)
    : geometry_(geometry) {
  check_geometry(geometry);
  if (fill != kUnknown && (fill < 0 || fill > 100)) {
    throw std::invalid_argument("occupancy fill must be kUnknown or in [0, 100]");
  }
  cells_.assign(geometry.cell_count(), fill);
}

void OccupancyGrid::set(const Cell& c, std::int8_t value) {
  if (value != kUnknown && (value < 0 || value > 100)) {
    throw std::invalid_argument("occupancy value out of range: " + std::to_string(value));
  }
  cells_[geometry_.index(c)] = value;
}

std::size_t OccupancyGrid::known_count() const {
  return static_cast<std::size_t>(
      std::count_if(cells_.begin(), cells_.end(), [](std::int8_t v) { return v != kUnknown; }));
}

BooleanGrid::BooleanGrid(const GridGeometry& geometry, bool fill) : geometry_(geometry) {
  check_geometry(geometry);
  cells_.assign(geometry.cell_count(), fill ? 1 : 0);
}

EsdfGrid::EsdfGrid(const GridGeometry& geometry, std::vector<double> distances)
    : geometry_(geometry), dist_(std::move(distances)) {
  check_geometry(geometry);
  if (dist_.size() != geometry.cell_count()) {
    throw std::invalid_argument("distance buffer does not match grid size");
  }
}

BooleanGrid threshold_occupancy(const OccupancyGrid& grid, double threshold) {
  BooleanGrid out(grid.geometry());
  const auto& src = grid.cells();
  for (std::size_t i = 0; i < src.size(); ++i) {
    if (src[i] != OccupancyGrid::kUnknown && src[i] > threshold) {
      out.set(grid.geometry().cell_of(i), true);
    }
  }
  return out;
}

EsdfGrid signed_distance_transform(const BooleanGrid& grid) {
  const auto& cells = grid.cells();
  const bool any_occupied = std::any_of(cells.begin(), cells.end(), [](auto v) { return v != 0; });
  const bool any_free = std::any_of(cells.begin(), cells.end(), [](auto v) { return v == 0; });
  const double diag = grid.geometry().diagonal();
  if (!any_occupied) return EsdfGrid(grid.geometry(), std::vector<double>(cells.size(), diag));
  if (!any_free) {
    return EsdfGrid(grid.geometry(),
                    std::vector<double>(cells.size(), -std::numeric_limits<double>::infinity()));
  }

  const double r = grid.geometry().resolution;
  const auto to_obstacle = squared_edt(grid, true);
  const auto to_free = squared_edt(grid, false);
  std::vector<double> d(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (cells[i] != 0) {
      d[i] = -std::sqrt(static_cast<double>(to_free[i])) * r;
    } else {
      d[i] = std::sqrt(static_cast<double>(to_obstacle[i])) * r;
    }
  }
  return EsdfGrid(grid.geometry(), std::move(d));
}

LocalMapWindow extract_local_window(const OccupancyGrid& grid, const Pose& center,
                                    double side_length, double side_width,
                                    double side_height) {
  if (!(side_length > 0.0) || !(side_width > 0.0)) {
    throw std::invalid_argument("local window sides must be positive");
  }
  const GridGeometry& parent = grid.geometry();
  const auto center_cell = parent.world_to_cell_checked(center.position());
  if (!center_cell) {
    throw InvalidPose("robot pose (" + std::to_string(center.x) + ", " +
                      std::to_string(center.y) + ") lies outside the map");
  }
  const double r = parent.resolution;
  const int w = std::max(1, static_cast<int>(std::lround(side_length / r)));
  const int h = std::max(1, static_cast<int>(std::lround(side_width / r)));

  LocalMapWindow win;
  win.side_length = side_length;
  win.side_width = side_width;
  win.side_height = side_height;
  win.center = center;
  win.offset = {center_cell->row - h / 2, center_cell->col - w / 2};

  GridGeometry g;
  g.width = w;
  g.height = h;
  g.resolution = r;
  g.origin = {parent.origin.x + win.offset.col * r, parent.origin.y + win.offset.row * r};
  win.grid = OccupancyGrid(g);

  // Only the overlap with the parent is visited.
  const int row_lo = std::max(0, -win.offset.row);
  const int row_hi = std::min(h, parent.height - win.offset.row);
  const int col_lo = std::max(0, -win.offset.col);
  const int col_hi = std::min(w, parent.width - win.offset.col);
  for (int row = row_lo; row < row_hi; ++row) {
    for (int col = col_lo; col < col_hi; ++col) {
      win.grid.set({row, col}, grid.at({row + win.offset.row, col + win.offset.col}));
    }
  }
  return win;
}

}  // namespace lwa
