#pragma once

#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "lwa/config.hpp"
#include "lwa/endpoint.hpp"
#include "lwa/geometry.hpp"
#include "lwa/grid.hpp"

namespace lwa {

using Rng = std::mt19937_64;

/// Ground truth for the simulator: a closed obstacle map and its ESDF.
class World {
 public:
  /// Throws ConfigError unless every boundary cell is occupied and `start`
  /// lies on a free cell.
  World(BooleanGrid truth, const Pose& start);

  const BooleanGrid& truth() const { return truth_; }
  const EsdfGrid& esdf() const { return esdf_; }
  const GridGeometry& geometry() const { return truth_.geometry(); }
  const Pose& start() const { return start_; }

  /// True clearance at a world position (cell lookup); -diagonal off-map.
  double clearance_at(const Vec2& p) const;

 private:
  BooleanGrid truth_;
  EsdfGrid esdf_;
  Pose start_;
};

/// Hit/miss occupancy integrator settings. Probabilities are on [0, 100].
struct SensorModel {
  int hit_increment = 30;
  int miss_decrement = 10;
  int initial_probability = 50;  // assigned to a cell the first time it is observed
  double range_noise = 0.01;     // meters, Gaussian sigma; 0 disables
};

/// Walks the cells pierced by a ray in order. `visit(cell, t_entry)` returns
/// false to stop; t_entry is the distance at which the ray enters the cell.
/// Stops on leaving the grid or once t_entry exceeds max_dist.
template <typename Visit>
void traverse_ray(const GridGeometry& g, const Vec2& origin, double heading, double max_dist,
                  Visit&& visit);

/// Simulated planar scanner: cfg.raw_beams beams spread over cfg.fov_deg,
/// beam i along pose.yaw + raw_beam_bearing(i). Ranges are measured to the
/// first occupied cell; no hit within sensor_range_max reads +inf. Throws
/// InvalidPose if the pose is off-map or inside an obstacle.
ScanFrame raycast_scan(const World& world, const Pose& pose, const PlannerConfig& cfg,
                       double noise_sigma = 0.0, Rng* rng = nullptr);

/// Hit/miss update along every beam. Cells before the return get a miss,
/// the cell holding the return gets a hit; beams without a return clear up
/// to sensor_range_max. Observed cells never revert to unknown.
void integrate_scan(OccupancyGrid& map, const Pose& pose, const ScanFrame& scan,
                    const PlannerConfig& cfg, const SensorModel& model);

enum class Mode { kExplore, kReturnHome, kDone, kStuck };

const char* mode_name(Mode m);

struct SimConfig {
  PlannerConfig planner;
  SensorModel sensor;
  double time_limit = 300.0;      // seconds of sim time before heading home
  double home_tolerance = 0.2;    // meters
  int max_ticks = 6000;
  int stuck_ticks = 50;
  double stuck_distance = 0.05;   // meters of net progress over stuck_ticks
  int dead_end_ticks = 5;         // consecutive ticks without an open sample
  double return_lookahead = 2.0;  // meters along the breadcrumb trail
  double pose_noise = 0.0;        // per-tick Gaussian drift of the truth, meters
  bool use_baseline = false;      // plan with plain A* instead of the ESDF cost

  void validate() const;
};

struct RobotState {
  Pose pose;        // estimate used for mapping and planning
  Pose true_pose;   // equals `pose` unless pose noise is enabled
  double velocity = 0.0;
  Pose home;
  double elapsed = 0.0;
  Mode mode = Mode::kExplore;
};

/// Everything tick() reads and writes, threaded explicitly between ticks.
struct EpisodeState {
  RobotState robot;
  OccupancyGrid map;
  std::optional<EndPoint> filter;
  std::vector<Vec2> trail;          // positions visited while exploring, home first
  std::size_t return_cursor = 0;
  int dead_end_count = 0;
  std::deque<Vec2> recent;          // last stuck_ticks positions
  std::int64_t ticks = 0;
  double odometer = 0.0;
  Rng rng;
};

EpisodeState make_episode_state(const World& world, const SimConfig& cfg, std::uint64_t seed);

struct TickRecord {
  std::int64_t tick = 0;
  double time = 0.0;             // sim time at which the scan was taken
  Mode mode = Mode::kExplore;    // mode this tick ran under
  Pose pose;                     // estimate after the move
  Vec2 goal{};
  double path_length = 0.0;
  double min_clearance = 0.0;    // local ESDF along the planned path
  bool surrogate = false;
  double displacement = 0.0;
  double true_clearance = 0.0;   // ground-truth ESDF at the robot after the move
  double plan_seconds = 0.0;     // wall time of window + ESDF + end-point + search
  std::string event;             // mode change reason, empty otherwise
};

/// One replanning cycle: scan, integrate, window, threshold, ESDF, end-point,
/// search, move. Throws std::logic_error if the episode already finished.
TickRecord tick(EpisodeState& state, const World& world, const SimConfig& cfg);

struct EpisodeSummary {
  std::uint64_t seed = 0;
  Mode final_mode = Mode::kExplore;
  bool failed = false;
  std::string failure;
  std::int64_t ticks = 0;
  double exploration_time = 0.0;  // seconds of sim time
  double distance = 0.0;          // odometer, meters
  double coverage = 0.0;          // percent of free cells observed
  double home_error = 0.0;        // meters
  double min_true_clearance = 0.0;
  int safety_violations = 0;      // ticks with true clearance below robot_radius
};

struct EpisodeLog {
  std::vector<TickRecord> records;
  EpisodeSummary summary;
};

/// Runs ticks until DONE, STUCK, failure or max_ticks. Deterministic in
/// `seed` apart from the plan_seconds timings.
EpisodeLog run_episode(const World& world, const SimConfig& cfg, std::uint64_t seed);

// ---------------------------------------------------------------------------

template <typename Visit>
void traverse_ray(const GridGeometry& g, const Vec2& origin, double heading, double max_dist,
                  Visit&& visit) {
  const double r = g.resolution;
  const double dx = std::cos(heading);
  const double dy = std::sin(heading);
  Cell c = g.world_to_cell(origin);
  // Position in cell units relative to the grid origin.
  const double ux = (origin.x - g.origin.x) / r;
  const double uy = (origin.y - g.origin.y) / r;
  const int step_c = dx > 0 ? 1 : (dx < 0 ? -1 : 0);
  const int step_r = dy > 0 ? 1 : (dy < 0 ? -1 : 0);
  const double inf = std::numeric_limits<double>::infinity();
  // Distance (meters) along the ray to the next vertical / horizontal border.
  double t_max_x = step_c > 0   ? (c.col + 1 - ux) * r / dx
                   : step_c < 0 ? (c.col - ux) * r / dx
                                : inf;
  double t_max_y = step_r > 0   ? (c.row + 1 - uy) * r / dy
                   : step_r < 0 ? (c.row - uy) * r / dy
                                : inf;
  const double t_delta_x = step_c != 0 ? r / std::abs(dx) : inf;
  const double t_delta_y = step_r != 0 ? r / std::abs(dy) : inf;
  double t_entry = 0.0;
  while (g.contains(c) && t_entry <= max_dist) {
    if (!visit(c, t_entry)) return;
    if (t_max_x < t_max_y) {
      t_entry = t_max_x;
      t_max_x += t_delta_x;
      c.col += step_c;
    } else {
      t_entry = t_max_y;
      t_max_y += t_delta_y;
      c.row += step_r;
    }
  }
}

}  // namespace lwa
