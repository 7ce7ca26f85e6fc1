#pragma once

#include <cstdint>
#include <vector>

#include "lwa/geometry.hpp"

namespace lwa {

/// Occupancy probabilities on [0, 100]; kUnknown marks never-observed cells.
class OccupancyGrid {
 public:
  static constexpr std::int8_t kUnknown = -1;

  OccupancyGrid() = default;
  /// Every cell starts as `fill`. Throws std::invalid_argument on bad geometry.
  explicit OccupancyGrid(const GridGeometry& geometry, std::int8_t fill = kUnknown);

  const GridGeometry& geometry() const { return geometry_; }
  int width() const { return geometry_.width; }
  int height() const { return geometry_.height; }
  double resolution() const { return geometry_.resolution; }

  std::int8_t at(const Cell& c) const { return cells_[geometry_.index(c)]; }
  bool is_unknown(const Cell& c) const { return at(c) == kUnknown; }
  /// Values outside [0, 100] other than kUnknown are rejected.
  void set(const Cell& c, std::int8_t value);

  const std::vector<std::int8_t>& cells() const { return cells_; }
  std::size_t known_count() const;

  bool operator==(const OccupancyGrid&) const = default;

 private:
  GridGeometry geometry_{};
  std::vector<std::int8_t> cells_;
};

/// Obstacle mask: true = OCCUPIED, false = FREE.
class BooleanGrid {
 public:
  BooleanGrid() = default;
  explicit BooleanGrid(const GridGeometry& geometry, bool fill = false);

  const GridGeometry& geometry() const { return geometry_; }
  int width() const { return geometry_.width; }
  int height() const { return geometry_.height; }

  bool occupied(const Cell& c) const { return cells_[geometry_.index(c)] != 0; }
  void set(const Cell& c, bool occupied) { cells_[geometry_.index(c)] = occupied ? 1 : 0; }
  const std::vector<std::uint8_t>& cells() const { return cells_; }

  bool operator==(const BooleanGrid&) const = default;

 private:
  GridGeometry geometry_{};
  std::vector<std::uint8_t> cells_;
};

/// Signed distance in meters to the nearest cell of the opposite class,
/// measured between cell centers. Positive in free space, negative inside
/// obstacles. A grid without obstacles holds +diagonal everywhere and a grid
/// without free cells holds -inf everywhere.
class EsdfGrid {
 public:
  EsdfGrid() = default;
  EsdfGrid(const GridGeometry& geometry, std::vector<double> distances);

  const GridGeometry& geometry() const { return geometry_; }
  int width() const { return geometry_.width; }
  int height() const { return geometry_.height; }
  double resolution() const { return geometry_.resolution; }

  double at(const Cell& c) const { return dist_[geometry_.index(c)]; }
  const std::vector<double>& distances() const { return dist_; }

  bool operator==(const EsdfGrid&) const = default;

 private:
  GridGeometry geometry_{};
  std::vector<double> dist_;
};

/// Fixed-size sub-map centered on the robot. `offset` is the parent cell that
/// coincides with the window's cell (0, 0); it may be negative.
struct LocalMapWindow {
  double side_length = 0.0;  // sL, meters along x
  double side_width = 0.0;   // sW, meters along y
  double side_height = 0.0;  // sH, carried as metadata
  Pose center{};
  Cell offset{};
  OccupancyGrid grid;
};

/// Cells with probability strictly above `threshold` become OCCUPIED;
/// unknown cells are FREE.
BooleanGrid threshold_occupancy(const OccupancyGrid& grid, double threshold);

/// Exact Euclidean signed distance transform (separable lower-envelope
/// method on integer squared distances).
EsdfGrid signed_distance_transform(const BooleanGrid& grid);

/// Copies the sL x sW rectangle around `center` out of `grid`. Window cells
/// outside the parent are UNKNOWN. Throws InvalidPose if the center is not on
/// the parent grid.
LocalMapWindow extract_local_window(const OccupancyGrid& grid, const Pose& center,
                                    double side_length, double side_width,
                                    double side_height = 0.0);

}  // namespace lwa
