#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "lwa/errors.hpp"
#include "lwa/grid.hpp"
#include "support/oracles.hpp"
#include "support/worlds.hpp"

using namespace lwa;

namespace {

GridGeometry geom(int w, int h, double r = 0.1, Vec2 origin = {}) {
  GridGeometry g;
  g.width = w;
  g.height = h;
  g.resolution = r;
  g.origin = origin;
  return g;
}

}  // namespace

TEST_SUITE("grid") {
  TEST_CASE("geometry round trip stays inside half a cell") {
    const GridGeometry g = geom(40, 30, 0.25, {-3.0, 1.5});
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ux(-3.0, -3.0 + 40 * 0.25);
    std::uniform_real_distribution<double> uy(1.5, 1.5 + 30 * 0.25);
    for (int i = 0; i < 500; ++i) {
      const Vec2 p{ux(rng), uy(rng)};
      const auto c = g.world_to_cell_checked(p);
      REQUIRE(c);
      const Vec2 back = g.cell_center(*c);
      CHECK(std::abs(back.x - p.x) <= 0.125 + 1e-12);
      CHECK(std::abs(back.y - p.y) <= 0.125 + 1e-12);
    }
    CHECK_FALSE(g.world_to_cell_checked({-3.01, 2.0}));
    CHECK(g.world_to_cell({-3.0, 1.5}) == Cell{0, 0});
  }

  TEST_CASE("grid construction rejects bad geometry and values") {
    CHECK_THROWS_AS(OccupancyGrid(geom(0, 5)), std::invalid_argument);
    CHECK_THROWS_AS(OccupancyGrid(geom(5, 5, 0.0)), std::invalid_argument);
    OccupancyGrid g(geom(3, 3));
    CHECK_THROWS_AS(g.set({1, 1}, 101), std::invalid_argument);
    CHECK_THROWS_AS(g.set({1, 1}, -2), std::invalid_argument);
    g.set({1, 1}, 100);
    g.set({1, 2}, 0);
    CHECK(g.known_count() == 2);
  }

  TEST_CASE("threshold is strict and unknown counts as free") {
    OccupancyGrid g(geom(3, 1));
    g.set({0, 0}, 71);
    g.set({0, 1}, 70);
    const BooleanGrid b = threshold_occupancy(g, 70.0);
    CHECK(b.occupied({0, 0}));
    CHECK_FALSE(b.occupied({0, 1}));
    CHECK_FALSE(b.occupied({0, 2}));

    const BooleanGrid all = threshold_occupancy(OccupancyGrid(geom(10, 10)), 70.0);
    CHECK(all == BooleanGrid(geom(10, 10), false));
  }

  TEST_CASE("3x3 single obstacle") {
    BooleanGrid b(geom(3, 3, 1.0));
    b.set({1, 1}, true);
    const EsdfGrid e = signed_distance_transform(b);
    CHECK(e.at({0, 0}) == std::sqrt(2.0));
    CHECK(e.at({2, 2}) == std::sqrt(2.0));
    CHECK(e.at({0, 1}) == 1.0);
    CHECK(e.at({1, 2}) == 1.0);
    CHECK(e.at({1, 1}) == -1.0);
  }

  TEST_CASE("single-class sentinels") {
    const EsdfGrid free = signed_distance_transform(BooleanGrid(geom(4, 3, 0.5), false));
    for (double d : free.distances()) CHECK(d == geom(4, 3, 0.5).diagonal());
    const EsdfGrid occ = signed_distance_transform(BooleanGrid(geom(4, 3, 0.5), true));
    for (double d : occ.distances()) {
      CHECK(std::isinf(d));
      CHECK(d < 0.0);
    }
  }

  TEST_CASE("transform matches the brute-force oracle exactly") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      const int w = 1 + static_cast<int>(seed % 23);
      const int h = 1 + static_cast<int>((seed * 7) % 19);
      const BooleanGrid b = testing::random_grid(w, h, 0.2 + 0.02 * (seed % 10), seed);
      const EsdfGrid e = signed_distance_transform(b);
      const auto ref = oracle::brute_force_edt(b);
      REQUIRE(e.distances().size() == ref.size());
      bool same = true;
      for (std::size_t i = 0; i < ref.size(); ++i) same = same && e.distances()[i] == ref[i];
      CHECK_MESSAGE(same, "seed " << seed);
    }
  }

  TEST_CASE("sign follows occupancy") {
    const BooleanGrid b = testing::random_grid(40, 40, 0.3, 11);
    const EsdfGrid e = signed_distance_transform(b);
    for (std::size_t i = 0; i < b.cells().size(); ++i) {
      CHECK((e.distances()[i] <= 0.0) == (b.cells()[i] != 0));
    }
  }

  TEST_CASE("Lipschitz bound on random pairs") {
    // Same-sign pairs are 1-Lipschitz. Across the boundary both magnitudes
    // are bounded by the pair's own distance, so the gap is at most twice it.
    std::mt19937_64 rng(5);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const BooleanGrid b = testing::random_grid(50, 50, 0.2, 100 + seed);
      const EsdfGrid e = signed_distance_transform(b);
      const GridGeometry& g = b.geometry();
      std::uniform_int_distribution<std::size_t> pick(0, g.cell_count() - 1);
      for (int i = 0; i < 1000; ++i) {
        const Cell a = g.cell_of(pick(rng));
        const Cell c = g.cell_of(pick(rng));
        const double dist = distance(g.cell_center(a), g.cell_center(c));
        const double gap = std::abs(e.at(a) - e.at(c));
        if (b.occupied(a) == b.occupied(c)) {
          CHECK(gap <= dist + 1e-9);
        } else {
          CHECK(gap <= 2.0 * dist + 1e-9);
        }
      }
    }
  }

  TEST_CASE("adding an obstacle never increases free distances") {
    BooleanGrid b = testing::random_grid(30, 30, 0.1, 9);
    EsdfGrid before = signed_distance_transform(b);
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<std::size_t> pick(0, b.cells().size() - 1);
    for (int step = 0; step < 20; ++step) {
      b.set(b.geometry().cell_of(pick(rng)), true);
      const EsdfGrid after = signed_distance_transform(b);
      for (std::size_t i = 0; i < b.cells().size(); ++i) {
        if (b.cells()[i] == 0) CHECK(after.distances()[i] <= before.distances()[i]);
      }
      before = after;
    }
  }

  TEST_CASE("window size is independent of the parent") {
    OccupancyGrid big(geom(2000, 2000));
    const LocalMapWindow w = extract_local_window(big, Pose(100.05, 100.05), 5.0, 5.0, 5.0);
    CHECK(w.grid.width() == 50);
    CHECK(w.grid.height() == 50);
    CHECK(w.side_height == 5.0);
    OccupancyGrid small(geom(100, 100));
    const LocalMapWindow s = extract_local_window(small, Pose(5.05, 5.05), 5.0, 5.0);
    CHECK(s.grid.cells().size() == w.grid.cells().size());
  }

  TEST_CASE("interior window copies the parent bit for bit") {
    OccupancyGrid parent(geom(80, 60));
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<int> v(-1, 100);
    for (int r = 0; r < 60; ++r) {
      for (int c = 0; c < 80; ++c) parent.set({r, c}, static_cast<std::int8_t>(v(rng)));
    }
    const LocalMapWindow w = extract_local_window(parent, Pose(4.03, 3.07), 5.0, 5.0);
    for (int r = 0; r < w.grid.height(); ++r) {
      for (int c = 0; c < w.grid.width(); ++c) {
        CHECK(w.grid.at({r, c}) == parent.at({r + w.offset.row, c + w.offset.col}));
      }
    }
    // Window cells line up with parent cells in world coordinates.
    const Vec2 p = w.grid.geometry().cell_center({0, 0});
    CHECK(parent.geometry().world_to_cell(p) == w.offset);
  }

  TEST_CASE("window clipped at the left edge") {
    OccupancyGrid parent(geom(100, 100), 0);
    const LocalMapWindow w = extract_local_window(parent, Pose(1.05, 5.05), 5.0, 5.0);
    for (int r = 0; r < w.grid.height(); ++r) {
      for (int c = 0; c < w.grid.width(); ++c) {
        CHECK(w.grid.is_unknown({r, c}) == (c < 15));
      }
    }
  }

  TEST_CASE("window center off the map") {
    OccupancyGrid parent(geom(10, 10));
    CHECK_THROWS_AS(extract_local_window(parent, Pose(-0.5, 0.5), 5.0, 5.0), InvalidPose);
    CHECK_THROWS_AS(extract_local_window(parent, Pose(0.5, 0.5), 0.0, 5.0),
                    std::invalid_argument);
  }
}
