#include "lwa/config.hpp"

#include <string>

#include "lwa/errors.hpp"

namespace lwa {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError("invalid planner config: " + what);
}

}  // namespace

void PlannerConfig::validate() const {
  require(threshold > 0.0 && threshold <= 100.0, "threshold must be in (0, 100]");
  require(planning_range > 0.0 && planning_range <= sensor_range_max,
          "planning_range must be in (0, sensor_range_max]");
  require(fov_deg > 0.0 && fov_deg <= 360.0, "fov_deg must be in (0, 360]");
  require(samples >= 1 && raw_beams >= 1, "samples and raw_beams must be positive");
  require(raw_beams % samples == 0, "samples must divide raw_beams");
  require(epsilon >= 0.0, "epsilon must be non-negative");
  require(d_safe > 0.0, "d_safe must be positive");
  require(lambda_dist >= 0.0, "lambda_dist must be non-negative");
  require(robot_radius >= 0.0, "robot_radius must be non-negative");
  require(replan_period > 0.0, "replan_period must be positive");
  require(v_max > 0.0, "v_max must be positive");
  require(lpf_cutoff > 0.0, "lpf_cutoff must be positive");
  require(window_length > 0.0 && window_width > 0.0 && window_height > 0.0,
          "window sides must be positive");
}

}  // namespace lwa
