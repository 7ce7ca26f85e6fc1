#pragma once

#include <cstddef>
#include <vector>

#include "lwa/config.hpp"
#include "lwa/endpoint.hpp"
#include "lwa/geometry.hpp"
#include "lwa/grid.hpp"

namespace lwa {

/// Cost shaping for the ESDF-weighted search. The estimated path length used
/// by the dynamic weight is derived per query from the start-goal distance.
struct CostModel {
  double epsilon = 1.0;
  double d_safe = 1.0;
  double lambda_dist = 5.0;
  double robot_radius = 0.3;

  static CostModel from_config(const PlannerConfig& cfg) {
    return {cfg.epsilon, cfg.d_safe, cfg.lambda_dist, cfg.robot_radius};
  }
};

/// Dynamic weight: 1 - depth/n_est while depth <= n_est, then 0.
double omega(double depth, double n_est);

/// Obstacle proximity cost of a cell: lambda*(d_safe - d) inside
/// [robot_radius, d_safe), 0 beyond d_safe, +inf below robot_radius.
double f_dist(const Cell& cell, const EsdfGrid& esdf, const CostModel& model);

struct PathNode {
  Cell cell{};
  Vec2 world{};
  double g = 0.0;
  double weighted_h = 0.0;  // (1 + eps*omega) * h at the node's depth
  double f_dist = 0.0;
  int depth = 0;
};

struct GridPath {
  std::vector<PathNode> nodes;  // start first
  /// Straight steps * r + diagonal steps * r*sqrt(2) + sum of f_dist over
  /// every node after the start. Counting steps keeps equal-length paths
  /// bit-identical regardless of step order.
  double total_cost = 0.0;
  double length = 0.0;       // meters
  bool surrogate = false;    // goal unreachable; ends at the closest reachable cell
  std::size_t expansions = 0;

  std::vector<Cell> cells() const;
  /// Smallest ESDF value over the path cells, looked up in `esdf` by world
  /// position. Cells outside `esdf` are ignored.
  double min_clearance(const EsdfGrid& esdf) const;
};

/// 8-connected best-first search minimizing
///   g + (1 + eps*omega(depth)) * h + f_dist,
/// where the step cost is the center-to-center distance plus the entered
/// cell's f_dist. Diagonal moves may not cut a non-traversable corner.
/// Ties break on lower f, then lower h, then row-major cell index.
///
/// Throws DeadEnd when no cell is traversable, InvalidStart when the start
/// cell is off-grid or too close to an obstacle, and std::invalid_argument
/// when the goal is off-grid. An unreachable goal yields a surrogate path.
GridPath plan(const Pose& start, const Vec2& goal, const EsdfGrid& esdf, const CostModel& model);

inline GridPath plan(const Pose& start, const EndPoint& goal, const EsdfGrid& esdf,
                     const CostModel& model) {
  return plan(start, goal.filtered, esdf, model);
}

/// Textbook A* over cells at least `robot_radius` from any obstacle in
/// `grid`: Euclidean heuristic, no clearance cost, same connectivity,
/// tie-breaking and fallback as plan().
GridPath plan_baseline_astar(const Pose& start, const Vec2& goal, const BooleanGrid& grid,
                             double robot_radius);

}  // namespace lwa
