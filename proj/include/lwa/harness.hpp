#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lwa/io.hpp"
#include "lwa/sim.hpp"

namespace lwa::harness {

/// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitMissionFailure = 1;
inline constexpr int kExitConfigError = 2;

struct RunConfig {
  SimConfig sim;
  std::string map_path;
  std::vector<std::uint64_t> seeds{1};
  std::string output_dir = "out";
  double resolution = 0.1;  // for ASCII maps without a sidecar
};

/// Every key accepted in config files and as a CLI override, in a stable order.
const std::vector<std::string>& setting_keys();

/// Applies one `key = value` setting. Throws ConfigError on unknown keys or
/// unparsable values.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);
void apply_settings(RunConfig& cfg, const std::map<std::string, std::string>& kv);
RunConfig load_run_config(const std::string& path);
/// Checks referenced files and value ranges; throws ConfigError.
void validate_run_config(const RunConfig& cfg, bool need_map);

std::vector<std::uint64_t> parse_seed_list(const std::string& text);

/// Ground truth from a map file: cells above `threshold` and unknown cells
/// are obstacles.
World make_world(const io::MapFile& map, double threshold);
World load_world(const std::string& path, double resolution, double threshold);

struct Stats {
  double avg = 0.0;
  double std = 0.0;  // sample standard deviation, 0 for a single value
  double max = 0.0;
  double min = 0.0;
  double median = 0.0;
  std::size_t count = 0;
};
Stats summarize(const std::vector<double>& values);

/// One episode per seed on independent threads; results ordered by seed
/// position in `seeds`.
std::vector<EpisodeLog> run_seeds(const World& world, const SimConfig& cfg,
                                  const std::vector<std::uint64_t>& seeds);

/// Table with one row: Avg/Std/Max/Min exploration time plus distance,
/// coverage and home error averages.
std::string format_summary_table(const std::string& method, const std::string& map_name,
                                 const std::vector<EpisodeLog>& logs);

struct BenchRow {
  std::string method;
  std::string map;
  std::vector<std::uint64_t> seeds;
  Stats exploration_time;
  double min_clearance = 0.0;  // lowest ground-truth clearance over all episodes
  Stats distance;
  Stats plan_time_us;          // per tick, pooled over seeds
  int failures = 0;
  int safety_violations = 0;
};

struct ScalingResult {
  double small_median_us = 0.0;
  double large_median_us = 0.0;
  std::size_t small_ticks = 0;
  std::size_t large_ticks = 0;
  double ratio() const { return small_median_us > 0.0 ? large_median_us / small_median_us : 0.0; }
};

struct BenchReport {
  std::vector<BenchRow> rows;
  ScalingResult scaling;
};

BenchRow bench_method(const std::string& method, const std::string& map_name, const World& world,
                      const SimConfig& cfg, const std::vector<std::uint64_t>& seeds);

/// Same 10 m x 10 m pillar room as a 100x100 world and embedded in the
/// corner of a 2000x2000 world (r = 0.1 m).
std::pair<World, World> make_scaling_worlds();
/// Median per-tick plan time on both worlds over at least `min_ticks` ticks.
ScalingResult measure_plan_time_scaling(const SimConfig& cfg, std::size_t min_ticks);

std::string format_bench_csv(const BenchReport& report);
std::string format_bench_table(const BenchReport& report);

}  // namespace lwa::harness
