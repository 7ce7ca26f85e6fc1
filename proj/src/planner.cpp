#include "lwa/planner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <queue>
#include <stdexcept>
#include <string>

#include "lwa/errors.hpp"

namespace lwa {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Move {
  int dr;
  int dc;
  bool diagonal;
};

constexpr Move kMoves[8] = {{-1, -1, true}, {-1, 0, false}, {-1, 1, true}, {0, -1, false},
                            {0, 1, false},  {1, -1, true},  {1, 0, false},  {1, 1, true}};

// Everything the search needs, independent of how traversability and the
// per-cell cost were derived.
struct SearchSpace {
  GridGeometry geometry;
  std::vector<std::uint8_t> traversable;
  std::vector<double> cell_cost;  // added on entering a cell
  double epsilon = 0.0;
};

struct OpenEntry {
  double f;
  double h;
  std::size_t index;
  double g;

  // std::priority_queue is a max-heap; invert to pop the smallest key.
  bool operator<(const OpenEntry& o) const {
    if (f != o.f) return f > o.f;
    if (h != o.h) return h > o.h;
    return index > o.index;
  }
};

GridPath search(const SearchSpace& space, const Pose& start_pose, const Vec2& goal_pos) {
  const GridGeometry& g = space.geometry;
  const double r = g.resolution;

  if (std::none_of(space.traversable.begin(), space.traversable.end(),
                   [](std::uint8_t t) { return t != 0; })) {
    throw DeadEnd("no traversable cell in the planning window");
  }
  const auto start = g.world_to_cell_checked(start_pose.position());
  if (!start) throw InvalidStart("start pose lies outside the planning window");
  const auto goal = g.world_to_cell_checked(goal_pos);
  if (!goal) throw std::invalid_argument("goal lies outside the planning window");
  const std::size_t start_idx = g.index(*start);
  const std::size_t goal_idx = g.index(*goal);
  if (!space.traversable[start_idx]) {
    throw InvalidStart("start cell (" + std::to_string(start->row) + ", " +
                       std::to_string(start->col) + ") is not traversable");
  }

  const Vec2 goal_center = g.cell_center(*goal);
  auto heuristic = [&](const Cell& c) { return distance(g.cell_center(c), goal_center); };

  const std::size_t n = g.cell_count();
  std::vector<double> cost(n, kInf);
  std::vector<int> depth(n, 0);
  std::vector<std::size_t> parent(n, n);
  std::vector<std::uint8_t> closed(n, 0);

  const double h_start = heuristic(*start);
  const double n_est = std::max(1.0, std::ceil(h_start / r - 1e-9));
  auto weighted = [&](double h, int d) { return (1.0 + space.epsilon * omega(d, n_est)) * h; };

  std::priority_queue<OpenEntry> open;
  cost[start_idx] = 0.0;
  open.push({weighted(h_start, 0), h_start, start_idx, 0.0});

  GridPath path;
  std::size_t best_idx = start_idx;
  double best_h = h_start;
  bool reached = false;

  while (!open.empty()) {
    const OpenEntry top = open.top();
    open.pop();
    if (closed[top.index] || top.g != cost[top.index]) continue;
    closed[top.index] = 1;
    ++path.expansions;

    if (top.h < best_h || (top.h == best_h && cost[top.index] < cost[best_idx])) {
      best_h = top.h;
      best_idx = top.index;
    }
    if (top.index == goal_idx) {
      reached = true;
      break;
    }

    const Cell c = g.cell_of(top.index);
    for (const Move& m : kMoves) {
      const Cell nb{c.row + m.dr, c.col + m.dc};
      if (!g.contains(nb)) continue;
      const std::size_t ni = g.index(nb);
      if (closed[ni] || !space.traversable[ni]) continue;
      if (m.diagonal && (!space.traversable[g.index({c.row + m.dr, c.col})] ||
                         !space.traversable[g.index({c.row, c.col + m.dc})])) {
        continue;
      }
      const double step = m.diagonal ? r * std::numbers::sqrt2 : r;
      const double g_new = cost[top.index] + step + space.cell_cost[ni];
      if (g_new >= cost[ni]) continue;
      cost[ni] = g_new;
      depth[ni] = depth[top.index] + 1;
      parent[ni] = top.index;
      const double h = heuristic(nb);
      open.push({g_new + weighted(h, depth[ni]) + space.cell_cost[ni], h, ni, g_new});
    }
  }

  const std::size_t end_idx = reached ? goal_idx : best_idx;
  path.surrogate = !reached;

  std::vector<std::size_t> chain;
  for (std::size_t i = end_idx; i != n; i = parent[i]) chain.push_back(i);
  std::reverse(chain.begin(), chain.end());

  int straight = 0;
  int diagonal = 0;
  double penalty = 0.0;
  for (std::size_t k = 0; k < chain.size(); ++k) {
    const std::size_t i = chain[k];
    const Cell c = g.cell_of(i);
    PathNode node;
    node.cell = c;
    node.world = g.cell_center(c);
    node.g = cost[i];
    node.depth = depth[i];
    node.weighted_h = weighted(heuristic(c), depth[i]);
    node.f_dist = space.cell_cost[i];
    path.nodes.push_back(node);
    if (k > 0) {
      const Cell p = g.cell_of(chain[k - 1]);
      (p.row != c.row && p.col != c.col) ? ++diagonal : ++straight;
      penalty += space.cell_cost[i];
    }
  }
  path.length = straight * r + diagonal * r * std::numbers::sqrt2;
  path.total_cost = path.length + penalty;
  return path;
}

}  // namespace

double omega(double depth, double n_est) {
  if (depth <= n_est) return 1.0 - depth / n_est;
  return 0.0;
}

double f_dist(const Cell& cell, const EsdfGrid& esdf, const CostModel& model) {
  const double d = esdf.at(cell);
  if (d < model.robot_radius) return kInf;
  if (d >= model.d_safe) return 0.0;
  return model.lambda_dist * (model.d_safe - d);
}

std::vector<Cell> GridPath::cells() const {
  std::vector<Cell> out;
  out.reserve(nodes.size());
  for (const auto& n : nodes) out.push_back(n.cell);
  return out;
}

double GridPath::min_clearance(const EsdfGrid& esdf) const {
  double m = kInf;
  for (const auto& n : nodes) {
    if (const auto c = esdf.geometry().world_to_cell_checked(n.world)) {
      m = std::min(m, esdf.at(*c));
    }
  }
  return m;
}

GridPath plan(const Pose& start, const Vec2& goal, const EsdfGrid& esdf, const CostModel& model) {
  SearchSpace space;
  space.geometry = esdf.geometry();
  space.epsilon = model.epsilon;
  const std::size_t n = space.geometry.cell_count();
  space.traversable.resize(n);
  space.cell_cost.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double c = f_dist(space.geometry.cell_of(i), esdf, model);
    space.traversable[i] = std::isfinite(c) ? 1 : 0;
    space.cell_cost[i] = std::isfinite(c) ? c : 0.0;
  }
  return search(space, start, goal);
}

GridPath plan_baseline_astar(const Pose& start, const Vec2& goal, const BooleanGrid& grid,
                             double robot_radius) {
  const EsdfGrid esdf = signed_distance_transform(grid);
  SearchSpace space;
  space.geometry = grid.geometry();
  space.epsilon = 0.0;
  const std::size_t n = space.geometry.cell_count();
  space.traversable.resize(n);
  space.cell_cost.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    space.traversable[i] = esdf.distances()[i] >= robot_radius ? 1 : 0;
  }
  return search(space, start, goal);
}

}  // namespace lwa
