#pragma once

// Slow reference implementations. They exist only to check the real code.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <queue>
#include <vector>

#include "lwa/geometry.hpp"
#include "lwa/grid.hpp"

namespace lwa::oracle {

// All-pairs signed distance: for every cell, the smallest center distance to
// any cell of the opposite class. Single-class grids use the sentinels of
// the real transform: +diagonal when nothing is occupied, -inf when nothing
// is free.
inline std::vector<double> brute_force_edt(const BooleanGrid& grid) {
  const GridGeometry& g = grid.geometry();
  const std::size_t n = g.cell_count();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Cell a = g.cell_of(i);
    const bool occ = grid.occupied(a);
    std::int64_t best = -1;
    for (std::size_t j = 0; j < n; ++j) {
      const Cell b = g.cell_of(j);
      if (grid.occupied(b) == occ) continue;
      const std::int64_t dr = a.row - b.row;
      const std::int64_t dc = a.col - b.col;
      const std::int64_t sq = dr * dr + dc * dc;
      if (best < 0 || sq < best) best = sq;
    }
    if (best < 0) {
      out[i] = occ ? -std::numeric_limits<double>::infinity() : g.diagonal();
      continue;
    }
    const double d = std::sqrt(static_cast<double>(best)) * g.resolution;
    out[i] = occ ? -d : d;
  }
  return out;
}

// Exact shortest path over `traversable` with 8-connectivity and the same
// corner rule as the planner (a diagonal needs both orthogonal neighbours
// traversable). Costs are kept as straight/diagonal step counts plus the
// summed per-cell penalty, so the optimum is exact rather than subject to
// accumulated rounding. Returns the cost in the planner's canonical form.
struct DijkstraResult {
  long straight = 0;
  long diagonal = 0;
  double penalty = 0.0;
  double cost(double r) const {
    return (straight * r + diagonal * r * std::numbers::sqrt2) + penalty;
  }
};

inline std::optional<DijkstraResult> dijkstra(const GridGeometry& g,
                                              const std::vector<std::uint8_t>& traversable,
                                              const std::vector<double>& cell_cost,
                                              const Cell& start, const Cell& goal) {
  const double r = g.resolution;
  const std::size_t n = g.cell_count();
  struct Label {
    long a = 0;
    long b = 0;
    double pen = 0.0;
    double key = std::numeric_limits<double>::infinity();
  };
  std::vector<Label> best(n);
  std::vector<std::uint8_t> done(n, 0);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  const std::size_t s = g.index(start);
  best[s].key = 0.0;
  pq.push({0.0, s});
  while (!pq.empty()) {
    const auto [k, i] = pq.top();
    pq.pop();
    if (done[i] || k != best[i].key) continue;
    done[i] = 1;
    if (i == g.index(goal)) {
      return DijkstraResult{best[i].a, best[i].b, best[i].pen};
    }
    const Cell c = g.cell_of(i);
    for (int dr = -1; dr <= 1; ++dr) {
      for (int dc = -1; dc <= 1; ++dc) {
        if (dr == 0 && dc == 0) continue;
        const Cell nb{c.row + dr, c.col + dc};
        if (!g.contains(nb) || !traversable[g.index(nb)]) continue;
        const bool diag = dr != 0 && dc != 0;
        if (diag && (!traversable[g.index({c.row + dr, c.col})] ||
                     !traversable[g.index({c.row, c.col + dc})])) {
          continue;
        }
        Label cand = best[i];
        (diag ? cand.b : cand.a) += 1;
        cand.pen += cell_cost[g.index(nb)];
        cand.key = cand.a * r + cand.b * r * std::numbers::sqrt2 + cand.pen;
        const std::size_t j = g.index(nb);
        if (cand.key < best[j].key) {
          best[j] = cand;
          pq.push({cand.key, j});
        }
      }
    }
  }
  return std::nullopt;
}

// Marches along the ray in 1 mm steps and reports the first sample that
// lands in an occupied cell, or +inf past `max_dist`.
inline double march_ray(const BooleanGrid& grid, const Vec2& origin, double heading,
                        double max_dist, double step = 1e-3) {
  const GridGeometry& g = grid.geometry();
  const Vec2 dir{std::cos(heading), std::sin(heading)};
  for (long i = 0;; ++i) {
    const double t = static_cast<double>(i) * step;
    if (t > max_dist) break;
    const auto c = g.world_to_cell_checked(origin + dir * t);
    if (!c) break;
    if (grid.occupied(*c)) return t;
  }
  return std::numeric_limits<double>::infinity();
}

// Length of the ray segment inside a cell's square (slab clipping).
inline double chord_length(const GridGeometry& g, const Vec2& origin, double heading,
                           const Cell& cell) {
  const Vec2 c = g.cell_center(cell);
  const double h = g.resolution / 2.0;
  const double d[2] = {std::cos(heading), std::sin(heading)};
  const double o[2] = {origin.x, origin.y};
  const double lo[2] = {c.x - h, c.y - h};
  const double hi[2] = {c.x + h, c.y + h};
  double t0 = 0.0;
  double t1 = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 2; ++k) {
    if (d[k] == 0.0) {
      if (o[k] < lo[k] || o[k] > hi[k]) return 0.0;
      continue;
    }
    double a = (lo[k] - o[k]) / d[k];
    double b = (hi[k] - o[k]) / d[k];
    if (a > b) std::swap(a, b);
    t0 = std::max(t0, a);
    t1 = std::min(t1, b);
  }
  return std::max(0.0, t1 - t0);
}

}  // namespace lwa::oracle
