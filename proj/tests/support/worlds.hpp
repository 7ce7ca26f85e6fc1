#pragma once

// Small hand-built worlds for tests: start fully occupied, carve free
// rectangles.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>

#include "lwa/geometry.hpp"
#include "lwa/grid.hpp"

namespace lwa::testing {

inline BooleanGrid solid(double width_m, double height_m, double r = 0.1) {
  GridGeometry g;
  g.width = static_cast<int>(std::lround(width_m / r));
  g.height = static_cast<int>(std::lround(height_m / r));
  g.resolution = r;
  return BooleanGrid(g, true);
}

// Sets every cell whose center lies in [x0, x1) x [y0, y1).
inline void paint(BooleanGrid& grid, double x0, double y0, double x1, double y1, bool occupied) {
  const GridGeometry& g = grid.geometry();
  for (int row = 0; row < g.height; ++row) {
    for (int col = 0; col < g.width; ++col) {
      const Vec2 p = g.cell_center({row, col});
      if (p.x >= x0 && p.x < x1 && p.y >= y0 && p.y < y1) grid.set({row, col}, occupied);
    }
  }
}

inline void carve(BooleanGrid& grid, double x0, double y0, double x1, double y1) {
  paint(grid, x0, y0, x1, y1, false);
}

inline BooleanGrid random_grid(int width, int height, double occupancy, std::uint64_t seed,
                               double r = 0.1) {
  GridGeometry g;
  g.width = width;
  g.height = height;
  g.resolution = r;
  BooleanGrid grid(g);
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution occ(occupancy);
  for (int row = 0; row < height; ++row) {
    for (int col = 0; col < width; ++col) grid.set({row, col}, occ(rng));
  }
  return grid;
}

// Random window with rectangular obstacle blobs, so searches meet real
// detours instead of salt-and-pepper noise.
inline BooleanGrid blob_window(std::uint64_t seed, int size = 50, double r = 0.1) {
  GridGeometry g;
  g.width = size;
  g.height = size;
  g.resolution = r;
  BooleanGrid b(g);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pos(0, size - 1);
  std::uniform_int_distribution<int> extent(1, 6);
  std::uniform_int_distribution<int> count(5, 25);
  const int n = count(rng);
  for (int i = 0; i < n; ++i) {
    const int r0 = pos(rng), c0 = pos(rng), hr = extent(rng), hc = extent(rng);
    for (int row = r0; row < std::min(size, r0 + hr); ++row) {
      for (int col = c0; col < std::min(size, c0 + hc); ++col) b.set({row, col}, true);
    }
  }
  return b;
}

// Straight corridor (3 m wide, free for y in [6.5, 9.5)) and the two
// branching variants used by the golden end-point scenarios. All are 16 m
// square at 0.1 m.
inline BooleanGrid straight_scene() {
  BooleanGrid g = solid(16.0, 16.0);
  carve(g, 1.0, 6.5, 15.0, 9.5);
  return g;
}

// The corridor ends at x = 8; a branch drops away to the right (-y) over
// x in [5.5, 8).
inline BooleanGrid right_open_scene() {
  BooleanGrid g = solid(16.0, 16.0);
  carve(g, 1.0, 6.5, 8.0, 9.5);
  carve(g, 5.5, 1.0, 8.0, 9.5);
  return g;
}

// Four-way junction centered on (8, 8).
inline BooleanGrid four_way_scene() {
  BooleanGrid g = solid(16.0, 16.0);
  carve(g, 1.0, 6.5, 15.0, 9.5);
  carve(g, 6.5, 1.0, 9.5, 15.0);
  return g;
}

}  // namespace lwa::testing
