#include "lwa/endpoint.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "lwa/errors.hpp"

namespace lwa {

namespace {
constexpr double kBearingTieTolerance = 1e-9;  // radians
}  // namespace

double sample_bearing(int k, const PlannerConfig& cfg) {
  const double fov = deg_to_rad(cfg.fov_deg);
  return k * fov / cfg.samples - fov / 2.0;
}

double raw_beam_bearing(int raw_index, const PlannerConfig& cfg) {
  const double fov = deg_to_rad(cfg.fov_deg);
  return (raw_index - 1) * fov / cfg.raw_beams + fov / cfg.samples - fov / 2.0;
}

double clamp_range(double sigma, const PlannerConfig& cfg) {
  const double l = cfg.planning_range;
  if (std::isinf(sigma)) return l;
  if (sigma >= l - 1.0 && sigma <= cfg.sensor_range_max) return l - 1.0;
  return sigma;
}

std::vector<SamplePoint> downsample_scan(const ScanFrame& scan, const PlannerConfig& cfg) {
  if (static_cast<int>(scan.ranges.size()) != cfg.raw_beams) {
    throw MalformedScan("scan has " + std::to_string(scan.ranges.size()) +
                        " ranges, expected " + std::to_string(cfg.raw_beams));
  }
  if (cfg.raw_beams % cfg.samples != 0) {
    throw MalformedScan("sample count does not divide the beam count");
  }
  const int stride = cfg.raw_beams / cfg.samples;
  std::vector<SamplePoint> out;
  out.reserve(static_cast<std::size_t>(cfg.samples));
  for (int k = 1; k <= cfg.samples; ++k) {
    const int raw = 1 + (k - 1) * stride;
    double sigma = scan.ranges[static_cast<std::size_t>(raw - 1)];
    if (std::isnan(sigma) || sigma <= 0.0) {
      throw MalformedScan("non-positive range at raw index " + std::to_string(raw));
    }
    if (sigma > cfg.sensor_range_max) sigma = std::numeric_limits<double>::infinity();
    out.push_back({k, raw, clamp_range(sigma, cfg), sample_bearing(k, cfg)});
  }
  return out;
}

std::size_t best_sample(const std::vector<SamplePoint>& samples) {
  if (samples.empty()) throw std::invalid_argument("no samples to choose from");
  std::size_t best = 0;
  for (std::size_t i = 1; i < samples.size(); ++i) {
    const auto& a = samples[i];
    const auto& b = samples[best];
    if (a.range != b.range) {
      if (a.range > b.range) best = i;
      continue;
    }
    // Mirrored samples must tie despite rounding in their bearings.
    const double fa = std::abs(a.bearing);
    const double fb = std::abs(b.bearing);
    if (std::abs(fa - fb) > kBearingTieTolerance) {
      if (fa < fb) best = i;
      continue;
    }
    if (a.k < b.k) best = i;
  }
  return best;
}

EndPoint select_endpoint(const Pose& pose, const std::vector<SamplePoint>& samples,
                         const EsdfGrid& esdf, const PlannerConfig& cfg) {
  const SamplePoint& s = samples[best_sample(samples)];
  EndPoint ep;
  ep.source_k = s.k;
  ep.range = s.range;
  const double heading = pose.yaw + s.bearing;
  ep.raw = pose.position() + Vec2{std::cos(heading), std::sin(heading)} * s.range;
  ep.position = ep.raw;

  const GridGeometry& g = esdf.geometry();
  const auto cell = g.world_to_cell_checked(ep.raw);
  if (!cell || esdf.at(*cell) < cfg.robot_radius) {
    double best_d = std::numeric_limits<double>::infinity();
    std::optional<Cell> best;
    for (int row = 0; row < g.height; ++row) {
      for (int col = 0; col < g.width; ++col) {
        if (esdf.at({row, col}) < cfg.robot_radius) continue;
        const double d = distance(g.cell_center({row, col}), ep.raw);
        if (d < best_d) {
          best_d = d;
          best = Cell{row, col};
        }
      }
    }
    if (!best) throw DeadEnd("no cell in the local window clears the robot radius");
    ep.position = g.cell_center(*best);
    ep.nudged = true;
  }
  ep.filtered = ep.position;
  return ep;
}

double lpf_alpha(const PlannerConfig& cfg) {
  const double wdt = 2.0 * std::numbers::pi * cfg.lpf_cutoff * cfg.replan_period;
  return wdt / (1.0 + wdt);
}

EndPoint lpf_endpoint(const std::optional<EndPoint>& prev, const EndPoint& fresh,
                      const PlannerConfig& cfg) {
  EndPoint out = fresh;
  if (!prev) {
    out.filtered = fresh.position;
    return out;
  }
  const double a = lpf_alpha(cfg);
  out.filtered = fresh.position * a + prev->filtered * (1.0 - a);
  return out;
}

}  // namespace lwa
