#include "lwa/sim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <string>

#include "lwa/errors.hpp"
#include "lwa/planner.hpp"

namespace lwa {

namespace {

constexpr double kTrailMergeRadius = 1.0;  // meters

bool boundary_closed(const BooleanGrid& g) {
  const int w = g.width();
  const int h = g.height();
  for (int c = 0; c < w; ++c) {
    if (!g.occupied({0, c}) || !g.occupied({h - 1, c})) return false;
  }
  for (int r = 0; r < h; ++r) {
    if (!g.occupied({r, 0}) || !g.occupied({r, w - 1})) return false;
  }
  return true;
}

std::int8_t clamp_probability(int v) { return static_cast<std::int8_t>(std::clamp(v, 0, 100)); }

void apply_update(OccupancyGrid& map, const Cell& c, int delta, const SensorModel& model) {
  const std::int8_t cur = map.at(c);
  const int base = cur == OccupancyGrid::kUnknown ? model.initial_probability : cur;
  map.set(c, clamp_probability(base + delta));
}

// Nearest cell (in BFS steps over non-occupied cells) whose clearance
// reaches the robot radius. Used when new observations leave the robot's
// own cell too close to an obstacle for the planner to start from.
std::optional<Cell> escape_cell(const BooleanGrid& occ, const EsdfGrid& esdf, const Cell& start,
                                double robot_radius) {
  const GridGeometry& g = occ.geometry();
  if (!g.contains(start)) return std::nullopt;
  std::vector<std::uint8_t> seen(g.cell_count(), 0);
  std::queue<Cell> q;
  q.push(start);
  seen[g.index(start)] = 1;
  while (!q.empty()) {
    const Cell c = q.front();
    q.pop();
    if (esdf.at(c) >= robot_radius) return c;
    for (int dr = -1; dr <= 1; ++dr) {
      for (int dc = -1; dc <= 1; ++dc) {
        if (dr == 0 && dc == 0) continue;
        const Cell nb{c.row + dr, c.col + dc};
        if (!g.contains(nb) || seen[g.index(nb)] || occ.occupied(nb)) continue;
        if (dr != 0 && dc != 0 &&
            (occ.occupied({c.row + dr, c.col}) || occ.occupied({c.row, c.col + dc}))) {
          continue;
        }
        seen[g.index(nb)] = 1;
        q.push(nb);
      }
    }
  }
  return std::nullopt;
}

bool crosses_obstacle(const World& world, const Vec2& from, const Vec2& delta) {
  const double len = delta.norm();
  if (len <= 0.0) return false;
  bool blocked = false;
  traverse_ray(world.geometry(), from, std::atan2(delta.y, delta.x), len,
               [&](const Cell& c, double) {
                 blocked = !world.geometry().contains(c) || world.truth().occupied(c);
                 return !blocked;
               });
  return blocked;
}

// Moves from `from` through `waypoints` in order, covering at most `step`.
Vec2 advance(const Vec2& from, const std::vector<Vec2>& waypoints, double step) {
  Vec2 p = from;
  double left = step;
  for (const Vec2& w : waypoints) {
    const double d = distance(p, w);
    if (d <= left) {
      p = w;
      left -= d;
      continue;
    }
    return p + (w - p) * (left / d);
  }
  return p;
}

Vec2 clamp_into(const GridGeometry& g, const Vec2& p) {
  if (g.world_to_cell_checked(p)) return p;
  Cell c = g.world_to_cell(p);
  c.row = std::clamp(c.row, 0, g.height - 1);
  c.col = std::clamp(c.col, 0, g.width - 1);
  return g.cell_center(c);
}

}  // namespace

World::World(BooleanGrid truth, const Pose& start) : truth_(std::move(truth)), start_(start) {
  if (!boundary_closed(truth_)) throw ConfigError("world boundary must be fully occupied");
  const auto c = truth_.geometry().world_to_cell_checked(start.position());
  if (!c || truth_.occupied(*c)) throw ConfigError("start pose must lie on a free cell");
  esdf_ = signed_distance_transform(truth_);
}

double World::clearance_at(const Vec2& p) const {
  const auto c = geometry().world_to_cell_checked(p);
  if (!c) return -geometry().diagonal();
  return esdf_.at(*c);
}

ScanFrame raycast_scan(const World& world, const Pose& pose, const PlannerConfig& cfg,
                       double noise_sigma, Rng* rng) {
  const GridGeometry& g = world.geometry();
  const auto origin_cell = g.world_to_cell_checked(pose.position());
  if (!origin_cell || world.truth().occupied(*origin_cell)) {
    throw InvalidPose("scan origin (" + std::to_string(pose.x) + ", " + std::to_string(pose.y) +
                      ") is not in free space");
  }
  ScanFrame scan;
  scan.fov_deg = cfg.fov_deg;
  scan.ranges.resize(static_cast<std::size_t>(cfg.raw_beams));
  std::normal_distribution<double> noise(0.0, noise_sigma > 0.0 ? noise_sigma : 1.0);
  const double inf = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= cfg.raw_beams; ++i) {
    double range = inf;
    traverse_ray(g, pose.position(), pose.yaw + raw_beam_bearing(i, cfg), cfg.sensor_range_max,
                 [&](const Cell& c, double t) {
                   if (!world.truth().occupied(c)) return true;
                   range = t;
                   return false;
                 });
    if (std::isfinite(range) && noise_sigma > 0.0 && rng != nullptr) {
      range = std::max(1e-3, range + noise(*rng));
    }
    scan.ranges[static_cast<std::size_t>(i - 1)] = range;
  }
  return scan;
}

void integrate_scan(OccupancyGrid& map, const Pose& pose, const ScanFrame& scan,
                    const PlannerConfig& cfg, const SensorModel& model) {
  const GridGeometry& g = map.geometry();
  std::vector<Cell> beam;
  const int n = static_cast<int>(scan.ranges.size());
  for (int i = 1; i <= n; ++i) {
    const double range = scan.ranges[static_cast<std::size_t>(i - 1)];
    const bool hit = std::isfinite(range) && range <= cfg.sensor_range_max;
    const double reach = hit ? range : cfg.sensor_range_max;
    beam.clear();
    traverse_ray(g, pose.position(), pose.yaw + raw_beam_bearing(i, cfg), reach,
                 [&](const Cell& c, double) {
                   beam.push_back(c);
                   return true;
                 });
    if (beam.empty()) continue;
    const std::size_t misses = hit ? beam.size() - 1 : beam.size();
    for (std::size_t k = 0; k < misses; ++k) apply_update(map, beam[k], -model.miss_decrement, model);
    if (hit) apply_update(map, beam.back(), model.hit_increment, model);
  }
}

const char* mode_name(Mode m) {
  switch (m) {
    case Mode::kExplore: return "EXPLORE";
    case Mode::kReturnHome: return "RETURN_HOME";
    case Mode::kDone: return "DONE";
    case Mode::kStuck: return "STUCK";
  }
  return "?";
}

void SimConfig::validate() const {
  planner.validate();
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(std::string("invalid sim config: ") + what);
  };
  require(sensor.hit_increment >= 0 && sensor.miss_decrement >= 0, "increments must be >= 0");
  require(sensor.initial_probability >= 0 && sensor.initial_probability <= 100,
          "initial_probability must be in [0, 100]");
  require(sensor.range_noise >= 0.0, "range_noise must be >= 0");
  require(time_limit >= 0.0, "time_limit must be >= 0");
  require(home_tolerance > 0.0, "home_tolerance must be positive");
  require(max_ticks >= 1, "max_ticks must be >= 1");
  require(stuck_ticks >= 1, "stuck_ticks must be >= 1");
  require(dead_end_ticks >= 1, "dead_end_ticks must be >= 1");
  require(return_lookahead > 0.0, "return_lookahead must be positive");
  require(pose_noise >= 0.0, "pose_noise must be >= 0");
}

EpisodeState make_episode_state(const World& world, const SimConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  EpisodeState st;
  st.robot.pose = world.start();
  st.robot.true_pose = world.start();
  st.robot.home = world.start();
  st.map = OccupancyGrid(world.geometry());
  st.trail.push_back(world.start().position());
  st.recent.push_back(world.start().position());
  st.rng.seed(seed);
  return st;
}

TickRecord tick(EpisodeState& st, const World& world, const SimConfig& cfg) {
  RobotState& robot = st.robot;
  if (robot.mode == Mode::kDone || robot.mode == Mode::kStuck) {
    throw std::logic_error("tick called on a finished episode");
  }
  const PlannerConfig& pc = cfg.planner;
  TickRecord rec;
  rec.tick = st.ticks;
  rec.time = robot.elapsed;

  const ScanFrame scan = raycast_scan(world, robot.true_pose, pc, cfg.sensor.range_noise, &st.rng);
  integrate_scan(st.map, robot.pose, scan, pc, cfg.sensor);
  if (std::all_of(scan.ranges.begin(), scan.ranges.end(),
                  [&](double range) { return range < pc.robot_radius; })) {
    // Walls inside the footprint on every beam: nowhere to go.
    robot.mode = Mode::kStuck;
    rec.mode = robot.mode;
    rec.event = "enclosed";
    rec.pose = robot.pose;
    rec.goal = robot.pose.position();
    rec.true_clearance = world.clearance_at(robot.true_pose.position());
    ++st.ticks;
    robot.elapsed = static_cast<double>(st.ticks) * pc.replan_period;
    return rec;
  }

  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();
  const LocalMapWindow window = extract_local_window(st.map, robot.pose, pc.window_length,
                                                     pc.window_width, pc.window_height);
  const BooleanGrid occ = threshold_occupancy(window.grid, pc.threshold);
  const EsdfGrid esdf = signed_distance_transform(occ);

  if (robot.mode == Mode::kExplore && robot.elapsed > cfg.time_limit) {
    robot.mode = Mode::kReturnHome;
    rec.event = "time_limit";
  }

  Vec2 goal = robot.pose.position();
  if (robot.mode == Mode::kExplore) {
    const auto samples = downsample_scan(scan, pc);
    const bool open = std::any_of(samples.begin(), samples.end(), [&](const SamplePoint& s) {
      return s.range >= pc.planning_range - 1.0;
    });
    st.dead_end_count = open ? 0 : st.dead_end_count + 1;
    if (st.dead_end_count >= cfg.dead_end_ticks) {
      robot.mode = Mode::kReturnHome;
      rec.event = "dead_end";
    } else if (!open) {
      // Hold position while the dead-end counter runs. Chasing a short side
      // beam here would swing the heading round and reset the count.
      rec.event = "blocked";
      const Cell here = esdf.geometry().world_to_cell(robot.pose.position());
      if (esdf.at(here) < pc.robot_radius && !escape_cell(occ, esdf, here, pc.robot_radius)) {
        robot.mode = Mode::kStuck;
        rec.event = "no_escape";
      }
    } else {
      try {
        const EndPoint fresh = select_endpoint(robot.pose, samples, esdf, pc);
        st.filter = lpf_endpoint(st.filter, fresh, pc);
        goal = st.filter->filtered;
      } catch (const DeadEnd&) {
        robot.mode = Mode::kReturnHome;
        rec.event = "dead_end";
      }
    }
  }
  if (robot.mode == Mode::kReturnHome) {
    if (st.return_cursor >= st.trail.size()) st.return_cursor = st.trail.size() - 1;
    while (st.return_cursor > 0 &&
           distance(st.trail[st.return_cursor - 1], robot.pose.position()) <= cfg.return_lookahead) {
      --st.return_cursor;
    }
    goal = st.trail[st.return_cursor];
  }
  rec.mode = robot.mode;

  std::vector<Vec2> waypoints;
  if (robot.mode == Mode::kReturnHome ||
      (robot.mode == Mode::kExplore && st.dead_end_count == 0)) {
    goal = clamp_into(esdf.geometry(), goal);
    try {
      const GridPath path =
          cfg.use_baseline ? plan_baseline_astar(robot.pose, goal, occ, pc.robot_radius)
                           : plan(robot.pose, goal, esdf, CostModel::from_config(pc));
      for (std::size_t k = 1; k < path.nodes.size(); ++k) waypoints.push_back(path.nodes[k].world);
      if (path.nodes.size() == 1 && !path.surrogate) waypoints.push_back(goal);
      rec.path_length = path.length;
      rec.min_clearance = path.min_clearance(esdf);
      rec.surrogate = path.surrogate;
    } catch (const InvalidStart&) {
      const auto here = esdf.geometry().world_to_cell(robot.pose.position());
      if (const auto out = escape_cell(occ, esdf, here, pc.robot_radius)) {
        waypoints.push_back(esdf.geometry().cell_center(*out));
        rec.event = rec.event.empty() ? "escape" : rec.event;
      } else {
        robot.mode = Mode::kStuck;
        rec.event = "no_escape";
      }
    } catch (const DeadEnd&) {
      robot.mode = Mode::kStuck;
      rec.event = "no_traversable_cell";
    }
  }
  rec.plan_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  rec.goal = goal;

  // Constant-speed pursuit of the path waypoints.
  const double step = pc.v_max * pc.replan_period;
  const Vec2 before = robot.pose.position();
  Vec2 after = advance(before, waypoints, step);
  Vec2 delta = after - before;
  Vec2 true_delta = delta;
  if (cfg.pose_noise > 0.0 && delta.norm() > 1e-9) {
    std::normal_distribution<double> drift(0.0, cfg.pose_noise);
    true_delta.x += drift(st.rng);
    true_delta.y += drift(st.rng);
  }
  if (crosses_obstacle(world, robot.true_pose.position(), true_delta)) {
    // Bumper: a move into a wall the map did not show is refused.
    after = before;
    delta = true_delta = Vec2{};
    if (rec.event.empty()) rec.event = "bump";
  }
  const double moved = delta.norm();
  double yaw = robot.pose.yaw;
  if (moved > 1e-9) yaw = std::atan2(delta.y, delta.x);
  robot.pose = Pose(after.x, after.y, robot.pose.z, yaw);

  const Vec2 true_after = robot.true_pose.position() + true_delta;
  robot.true_pose = Pose(true_after.x, true_after.y, robot.true_pose.z, yaw);
  robot.velocity = moved / pc.replan_period;

  rec.displacement = true_delta.norm();
  st.odometer += rec.displacement;
  ++st.ticks;
  robot.elapsed = static_cast<double>(st.ticks) * pc.replan_period;

  if (robot.mode == Mode::kExplore) {
    // Loop erasure: revisiting an earlier trail point drops the detour, so
    // the way home never replays back-and-forth motion.
    std::size_t keep = st.trail.size();
    for (std::size_t j = 0; j < st.trail.size(); ++j) {
      if (distance(st.trail[j], after) < kTrailMergeRadius) {
        keep = j + 1;
        break;
      }
    }
    st.trail.resize(keep);
    st.trail.push_back(after);
    st.return_cursor = st.trail.size() - 1;
  } else if (robot.mode == Mode::kReturnHome && st.return_cursor == 0 &&
             moved < step - 1e-9 &&
             distance(after, robot.home.position()) <= cfg.home_tolerance) {
    // Moving less than a full step means the path to home ran out this tick.
    robot.mode = Mode::kDone;
    rec.event = "home";
  }

  st.recent.push_back(after);
  while (static_cast<int>(st.recent.size()) > cfg.stuck_ticks + 1) st.recent.pop_front();
  if ((robot.mode == Mode::kExplore || robot.mode == Mode::kReturnHome) &&
      static_cast<int>(st.recent.size()) == cfg.stuck_ticks + 1 &&
      std::all_of(st.recent.begin(), st.recent.end(), [&](const Vec2& p) {
        // Every position in the window, not just the last, must stay close:
        // a turn-around passes its own earlier position with zero net motion.
        return distance(st.recent.front(), p) < cfg.stuck_distance;
      })) {
    robot.mode = Mode::kStuck;
    rec.event = "no_progress";
  }

  rec.pose = robot.pose;
  rec.true_clearance = world.clearance_at(robot.true_pose.position());
  return rec;
}

EpisodeLog run_episode(const World& world, const SimConfig& cfg, std::uint64_t seed) {
  EpisodeLog log;
  EpisodeState st = make_episode_state(world, cfg, seed);
  log.summary.seed = seed;
  double min_clear = world.clearance_at(st.robot.true_pose.position());
  try {
    while (st.robot.mode != Mode::kDone && st.robot.mode != Mode::kStuck &&
           st.ticks < cfg.max_ticks) {
      TickRecord rec = tick(st, world, cfg);
      min_clear = std::min(min_clear, rec.true_clearance);
      if (rec.true_clearance < cfg.planner.robot_radius) ++log.summary.safety_violations;
      log.records.push_back(std::move(rec));
    }
  } catch (const Error& e) {
    log.summary.failed = true;
    log.summary.failure = e.what();
  }

  EpisodeSummary& s = log.summary;
  s.final_mode = st.robot.mode;
  s.ticks = st.ticks;
  s.exploration_time = st.robot.elapsed;
  s.distance = st.odometer;
  s.home_error = distance(st.robot.true_pose.position(), st.robot.home.position());
  s.min_true_clearance = min_clear;

  const auto& truth = world.truth().cells();
  const auto& known = st.map.cells();
  std::size_t free_total = 0;
  std::size_t free_seen = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] != 0) continue;
    ++free_total;
    if (known[i] != OccupancyGrid::kUnknown) ++free_seen;
  }
  s.coverage = free_total == 0 ? 0.0 : 100.0 * static_cast<double>(free_seen) / free_total;
  return log;
}

}  // namespace lwa
