#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>

namespace lwa {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  bool operator==(const Vec2&) const = default;

  double norm() const { return std::hypot(x, y); }
};

inline double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

/// Wraps an angle into (-pi, pi].
inline double wrap_angle(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  a = std::fmod(a, two_pi);
  if (a <= -std::numbers::pi) a += two_pi;
  if (a > std::numbers::pi) a -= two_pi;
  return a;
}

inline double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

/// Robot state [x, y, z, yaw]. z is carried but the planner is planar.
struct Pose {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double yaw = 0.0;

  Pose() = default;
  Pose(double x_, double y_, double z_ = 0.0, double yaw_ = 0.0)
      : x(x_), y(y_), z(z_), yaw(wrap_angle(yaw_)) {}

  Vec2 position() const { return {x, y}; }
  bool operator==(const Pose&) const = default;
};

struct Cell {
  int row = 0;
  int col = 0;
  bool operator==(const Cell&) const = default;
};

/// Placement of a regular grid in the world. Row 0 is the lowest-y row and
/// `origin` is the world position of the outer corner of cell (0, 0).
struct GridGeometry {
  int width = 0;
  int height = 0;
  double resolution = 0.1;
  Vec2 origin{};

  std::size_t cell_count() const {
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  }
  bool contains(const Cell& c) const {
    return c.row >= 0 && c.col >= 0 && c.row < height && c.col < width;
  }
  std::size_t index(const Cell& c) const {
    return static_cast<std::size_t>(c.row) * static_cast<std::size_t>(width) +
           static_cast<std::size_t>(c.col);
  }
  Cell cell_of(std::size_t idx) const {
    return {static_cast<int>(idx / static_cast<std::size_t>(width)),
            static_cast<int>(idx % static_cast<std::size_t>(width))};
  }
  /// Cell containing a world point; may lie outside the grid.
  Cell world_to_cell(const Vec2& p) const {
    return {static_cast<int>(std::floor((p.y - origin.y) / resolution)),
            static_cast<int>(std::floor((p.x - origin.x) / resolution))};
  }
  std::optional<Cell> world_to_cell_checked(const Vec2& p) const {
    Cell c = world_to_cell(p);
    if (!contains(c)) return std::nullopt;
    return c;
  }
  Vec2 cell_center(const Cell& c) const {
    return {origin.x + (c.col + 0.5) * resolution,
            origin.y + (c.row + 0.5) * resolution};
  }
  double diagonal() const { return std::hypot(width, height) * resolution; }
  bool operator==(const GridGeometry&) const = default;
};

}  // namespace lwa
