#pragma once

#include <optional>
#include <vector>

#include "lwa/config.hpp"
#include "lwa/geometry.hpp"
#include "lwa/grid.hpp"

namespace lwa {

/// One sweep of the planar range sensor. ranges[i] belongs to raw index i+1;
/// +inf means no return within range.
struct ScanFrame {
  std::vector<double> ranges;
  double fov_deg = 240.0;
  double timestamp = 0.0;
};

struct SamplePoint {
  int k = 0;             // 1-based sample index
  int raw_index = 0;     // 1-based index into the raw scan
  double range = 0.0;    // clamped range S_k, meters
  double bearing = 0.0;  // body frame, radians
};

struct EndPoint {
  Vec2 raw{};        // pose + S_k* along the winning bearing
  Vec2 position{};   // raw, moved onto a cell with enough clearance if needed
  Vec2 filtered{};   // low-pass output
  int source_k = 0;
  double range = 0.0;
  bool nudged = false;
};

/// Body-frame bearing of sample k in radians: k*fov/N - fov/2.
double sample_bearing(int k, const PlannerConfig& cfg);

/// Bearing of raw beam i (1-based). Chosen so raw index 1 + (k-1)*stride
/// points exactly along sample_bearing(k).
double raw_beam_bearing(int raw_index, const PlannerConfig& cfg);

/// Receding-horizon range clamp: +inf -> l, [l-1, l_max] -> l-1, otherwise
/// unchanged.
double clamp_range(double sigma, const PlannerConfig& cfg);

/// Picks N evenly strided beams starting at raw index 1 and clamps their
/// ranges. Finite readings beyond l_max are treated as no return. Throws
/// MalformedScan when the scan length differs from cfg.raw_beams.
std::vector<SamplePoint> downsample_scan(const ScanFrame& scan, const PlannerConfig& cfg);

/// Index into `samples` of the farthest sample; ties go to the smallest
/// |bearing|, then the smallest k.
std::size_t best_sample(const std::vector<SamplePoint>& samples);

/// Farthest-sample end-point. If the target cell is outside `esdf` or closer
/// than robot_radius to an obstacle, the end-point moves to the nearest cell
/// center with enough clearance. Throws DeadEnd if no such cell exists and
/// std::invalid_argument if `samples` is empty. `filtered` equals `position`.
EndPoint select_endpoint(const Pose& pose, const std::vector<SamplePoint>& samples,
                         const EsdfGrid& esdf, const PlannerConfig& cfg);

/// Smoothing coefficient of the first-order filter at the replan rate.
double lpf_alpha(const PlannerConfig& cfg);

/// First-order low-pass on the end-point position, per axis. With no
/// previous end-point the fresh position passes through unchanged.
EndPoint lpf_endpoint(const std::optional<EndPoint>& prev, const EndPoint& fresh,
                      const PlannerConfig& cfg);

}  // namespace lwa
