#pragma once

namespace lwa {

/// Tuning shared by every stage of the pipeline. Defaults reproduce the
/// reference platform: 1440-beam scanner, 48 samples over 240 degrees,
/// 5 m planning range and a 5 m x 5 m local map replanned at 10 Hz.
struct PlannerConfig {
  double threshold = 70.0;        // occupancy probability above which a cell is an obstacle
  double planning_range = 5.0;    // l, meters
  double sensor_range_max = 15.0; // l_max, meters
  double fov_deg = 240.0;         // sample field of view
  int samples = 48;
  int raw_beams = 1440;
  double epsilon = 1.0;           // dynamic heuristic weight
  double d_safe = 1.0;            // clearance at which the obstacle cost saturates to zero
  double lambda_dist = 5.0;
  double robot_radius = 0.3;
  double replan_period = 0.1;     // seconds
  double v_max = 2.0;             // meters/second
  double lpf_cutoff = 1.0;        // Hz
  double window_length = 5.0;     // sL, along world x
  double window_width = 5.0;      // sW, along world y
  double window_height = 5.0;     // sH, metadata only

  /// Throws ConfigError naming the first violated constraint.
  void validate() const;
};

}  // namespace lwa
