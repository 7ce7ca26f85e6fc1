#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "lwa/errors.hpp"
#include "lwa/planner.hpp"
#include "support/oracles.hpp"
#include "support/worlds.hpp"

using namespace lwa;

namespace {

GridGeometry window_geom(int w = 50, int h = 50) {
  GridGeometry g;
  g.width = w;
  g.height = h;
  g.resolution = 0.1;
  return g;
}

Pose at(const GridGeometry& g, int col, int row) {
  const Vec2 p = g.cell_center({row, col});
  return Pose(p.x, p.y);
}

struct Trial {
  EsdfGrid esdf;
  Cell start;
  Cell goal;
};

// Start and goal on traversable cells; the goal may still be unreachable.
std::optional<Trial> make_trial(std::uint64_t seed, double robot_radius) {
  const BooleanGrid b = testing::blob_window(seed);
  Trial t{signed_distance_transform(b), {}, {}};
  std::vector<Cell> ok;
  for (std::size_t i = 0; i < b.cells().size(); ++i) {
    if (t.esdf.distances()[i] >= robot_radius) ok.push_back(b.geometry().cell_of(i));
  }
  if (ok.size() < 2) return std::nullopt;
  std::mt19937_64 rng(seed * 31 + 7);
  std::uniform_int_distribution<std::size_t> pick(0, ok.size() - 1);
  t.start = ok[pick(rng)];
  t.goal = ok[pick(rng)];
  return t;
}

std::optional<oracle::DijkstraResult> oracle_for(const Trial& t, const CostModel& m) {
  const GridGeometry& g = t.esdf.geometry();
  std::vector<std::uint8_t> trav(g.cell_count());
  std::vector<double> cost(g.cell_count());
  for (std::size_t i = 0; i < trav.size(); ++i) {
    const double c = f_dist(g.cell_of(i), t.esdf, m);
    trav[i] = std::isfinite(c);
    cost[i] = std::isfinite(c) ? c : 0.0;
  }
  return oracle::dijkstra(g, trav, cost, t.start, t.goal);
}

void check_path_shape(const GridPath& p, const EsdfGrid& esdf, double robot_radius) {
  for (std::size_t k = 0; k < p.nodes.size(); ++k) {
    CHECK(esdf.at(p.nodes[k].cell) >= robot_radius);
    CHECK(p.nodes[k].depth == static_cast<int>(k));
    if (k == 0) continue;
    const Cell a = p.nodes[k - 1].cell;
    const Cell b = p.nodes[k].cell;
    CHECK(std::max(std::abs(a.row - b.row), std::abs(a.col - b.col)) == 1);
  }
}

}  // namespace

TEST_SUITE("planner") {
  TEST_CASE("dynamic weight") {
    CHECK(omega(0, 40) == 1.0);
    CHECK(omega(40, 40) == 0.0);
    CHECK(omega(20, 40) == 0.5);
    CHECK(omega(41, 40) == 0.0);
  }

  TEST_CASE("clearance cost") {
    GridGeometry g = window_geom(3, 1);
    const EsdfGrid esdf(g, {1.0, 0.5, 0.2});
    const CostModel m{1.0, 1.0, 5.0, 0.3};
    CHECK(f_dist({0, 0}, esdf, m) == 0.0);
    CHECK(f_dist({0, 1}, esdf, m) == 2.5);
    CHECK(std::isinf(f_dist({0, 2}, esdf, m)));
  }

  TEST_CASE("straight path in an empty window") {
    const GridGeometry g = window_geom();
    const EsdfGrid esdf = signed_distance_transform(BooleanGrid(g));
    const GridPath p = plan(at(g, 5, 25), g.cell_center({25, 45}), esdf, CostModel{});
    REQUIRE(p.nodes.size() == 41);
    CHECK_FALSE(p.surrogate);
    for (const auto& n : p.nodes) CHECK(n.cell.row == 25);
    CHECK(p.nodes.back().cell == Cell{25, 45});
    CHECK(p.nodes.back().g == doctest::Approx(40 * 0.1));
    CHECK(p.total_cost == 40 * 0.1);
    CHECK(p.length == 40 * 0.1);
    CHECK(p.nodes.back().weighted_h == 0.0);
  }

  TEST_CASE("start equal to goal") {
    const GridGeometry g = window_geom();
    const EsdfGrid esdf = signed_distance_transform(BooleanGrid(g));
    const GridPath p = plan(at(g, 7, 7), g.cell_center({7, 7}), esdf, CostModel{});
    CHECK(p.nodes.size() == 1);
    CHECK(p.total_cost == 0.0);
    CHECK_FALSE(p.surrogate);
  }

  TEST_CASE("zero weight and zero clearance cost are optimal") {
    const CostModel m{0.0, 1.0, 0.0, 0.1};
    int compared = 0;
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
      const auto t = make_trial(seed, m.robot_radius);
      if (!t) continue;
      const auto ref = oracle_for(*t, m);
      const GridGeometry& g = t->esdf.geometry();
      const GridPath p = plan(at(g, t->start.col, t->start.row), g.cell_center(t->goal), t->esdf, m);
      CHECK(p.surrogate == !ref.has_value());
      if (!ref) continue;
      ++compared;
      CHECK_MESSAGE(p.total_cost == ref->cost(0.1), "seed " << seed);
      check_path_shape(p, t->esdf, m.robot_radius);
    }
    CHECK(compared > 30);
  }

  TEST_CASE("weighted search stays within (1 + eps) of optimal") {
    for (double eps : {0.5, 1.0, 2.0}) {
      const CostModel m{eps, 1.0, 0.0, 0.1};
      for (std::uint64_t seed = 200; seed < 240; ++seed) {
        const auto t = make_trial(seed, m.robot_radius);
        if (!t) continue;
        const auto ref = oracle_for(*t, m);
        if (!ref) continue;
        const GridGeometry& g = t->esdf.geometry();
        const GridPath p =
            plan(at(g, t->start.col, t->start.row), g.cell_center(t->goal), t->esdf, m);
        CHECK(p.total_cost <= (1.0 + eps) * ref->cost(0.1) + 1e-9);
      }
    }
  }

  TEST_CASE("paths keep clear of obstacles and are deterministic") {
    const CostModel m{1.0, 1.0, 5.0, 0.3};
    for (std::uint64_t seed = 300; seed < 320; ++seed) {
      const auto t = make_trial(seed, m.robot_radius);
      if (!t) continue;
      const GridGeometry& g = t->esdf.geometry();
      const GridPath a = plan(at(g, t->start.col, t->start.row), g.cell_center(t->goal), t->esdf, m);
      const GridPath b = plan(at(g, t->start.col, t->start.row), g.cell_center(t->goal), t->esdf, m);
      check_path_shape(a, t->esdf, m.robot_radius);
      CHECK(a.cells() == b.cells());
      CHECK(a.total_cost == b.total_cost);
      CHECK(a.expansions == b.expansions);
    }
  }

  TEST_CASE("no corner cutting") {
    // Free cells (0,0) and (1,1) touch only diagonally.
    GridGeometry g = window_geom(2, 2);
    BooleanGrid b(g);
    b.set({0, 1}, true);
    b.set({1, 0}, true);
    const EsdfGrid esdf = signed_distance_transform(b);
    const CostModel m{0.0, 1.0, 0.0, 0.05};
    const GridPath p = plan(at(g, 0, 0), g.cell_center({1, 1}), esdf, m);
    CHECK(p.surrogate);
    CHECK(p.nodes.size() == 1);
  }

  TEST_CASE("corridor path hugs the centerline; plain search does not") {
    // L-shaped corridor, 9 cells wide, r = 0.1 m.
    GridGeometry g = window_geom(60, 60);
    BooleanGrid b(g, true);
    for (int r = 5; r < 14; ++r) {
      for (int c = 5; c < 55; ++c) b.set({r, c}, false);
    }
    for (int r = 5; r < 55; ++r) {
      for (int c = 46; c < 55; ++c) b.set({r, c}, false);
    }
    const EsdfGrid esdf = signed_distance_transform(b);
    const Pose start = at(g, 8, 9);
    const Vec2 goal = g.cell_center({51, 50});
    const GridPath safe = plan(start, goal, esdf, CostModel{1.0, 1.0, 5.0, 0.3});
    const GridPath plain = plan(start, goal, esdf, CostModel{0.0, 1.0, 0.0, 0.3});
    REQUIRE_FALSE(safe.surrogate);
    REQUIRE_FALSE(plain.surrogate);
    for (const auto& n : safe.nodes) CHECK(esdf.at(n.cell) >= 0.45 - 0.1 - 1e-9);
    CHECK(safe.min_clearance(esdf) > plain.min_clearance(esdf));

    const GridPath base = plan_baseline_astar(start, goal, b, 0.3);
    CHECK(base.min_clearance(esdf) <= safe.min_clearance(esdf));
  }

  TEST_CASE("baseline equals the zero-cost planner in an empty window") {
    const GridGeometry g = window_geom();
    const BooleanGrid b(g);
    const EsdfGrid esdf = signed_distance_transform(b);
    const CostModel m{0.0, 1.0, 0.0, 0.3};
    for (int i = 0; i < 10; ++i) {
      const Pose s = at(g, 3 + i, 7 + 2 * i);
      const Vec2 goal = g.cell_center({40 - i, 45 - 3 * i});
      CHECK(plan_baseline_astar(s, goal, b, 0.3).cells() == plan(s, goal, esdf, m).cells());
    }
  }

  TEST_CASE("unreachable goal gives the same surrogate in both planners") {
    GridGeometry g = window_geom(30, 30);
    BooleanGrid b(g);
    for (int r = 0; r < 30; ++r) b.set({r, 15}, true);  // full wall
    const EsdfGrid esdf = signed_distance_transform(b);
    const Pose s = at(g, 3, 10);
    const Vec2 goal = g.cell_center({20, 25});
    const CostModel m{0.0, 1.0, 0.0, 0.3};
    const GridPath p = plan(s, goal, esdf, m);
    const GridPath q = plan_baseline_astar(s, goal, b, 0.3);
    CHECK(p.surrogate);
    CHECK(q.surrogate);
    CHECK(p.cells() == q.cells());
    // Closest reachable cell to the goal: column 12 (clearance 0.3), row 20.
    CHECK(p.nodes.back().cell == Cell{20, 12});
  }

  TEST_CASE("planner errors") {
    const GridGeometry g = window_geom(20, 20);
    const CostModel m{};
    CHECK_THROWS_AS(plan(at(g, 5, 5), g.cell_center({1, 1}),
                         signed_distance_transform(BooleanGrid(g, true)), m),
                    DeadEnd);
    BooleanGrid b(g);
    b.set({5, 6}, true);
    const EsdfGrid esdf = signed_distance_transform(b);
    CHECK_THROWS_AS(plan(at(g, 5, 5), g.cell_center({15, 15}), esdf, m), InvalidStart);
    CHECK_THROWS_AS(plan(Pose(-1.0, 0.5), g.cell_center({15, 15}), esdf, m), InvalidStart);
    CHECK_THROWS_AS(plan(at(g, 15, 15), Vec2{5.0, 5.0}, esdf, m), std::invalid_argument);
  }

  TEST_CASE("end-point overload plans to the filtered position") {
    const GridGeometry g = window_geom();
    const EsdfGrid esdf = signed_distance_transform(BooleanGrid(g));
    EndPoint ep;
    ep.position = g.cell_center({40, 40});
    ep.filtered = g.cell_center({30, 20});
    const GridPath p = plan(at(g, 5, 5), ep, esdf, CostModel{});
    CHECK(p.nodes.back().cell == Cell{30, 20});
  }
}
