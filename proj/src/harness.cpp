#include "lwa/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <functional>
#include <future>
#include <iomanip>
#include <limits>
#include <sstream>

#include "lwa/errors.hpp"

namespace lwa::harness {

namespace {

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const char* first = v.data();
  if (!v.empty() && v[0] == '+') ++first;
  auto res = std::from_chars(first, v.data() + v.size(), out);
  if (v.empty() || res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    throw ConfigError("setting '" + key + "': expected a number, got '" + v + "'");
  }
  return out;
}

int to_int(const std::string& key, const std::string& v) {
  int out = 0;
  auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    throw ConfigError("setting '" + key + "': expected an integer, got '" + v + "'");
  }
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "on" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "off" || v == "no") return false;
  throw ConfigError("setting '" + key + "': expected a boolean, got '" + v + "'");
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

template <typename T>
Setter num(T SimConfig::*field) {
  return [field](RunConfig& c, const std::string& k, const std::string& v) {
    if constexpr (std::is_same_v<T, int>) {
      c.sim.*field = to_int(k, v);
    } else {
      c.sim.*field = to_double(k, v);
    }
  };
}

template <typename T>
Setter planner(T PlannerConfig::*field) {
  return [field](RunConfig& c, const std::string& k, const std::string& v) {
    if constexpr (std::is_same_v<T, int>) {
      c.sim.planner.*field = to_int(k, v);
    } else {
      c.sim.planner.*field = to_double(k, v);
    }
  };
}

template <typename T>
Setter sensor(T SensorModel::*field) {
  return [field](RunConfig& c, const std::string& k, const std::string& v) {
    if constexpr (std::is_same_v<T, int>) {
      c.sim.sensor.*field = to_int(k, v);
    } else {
      c.sim.sensor.*field = to_double(k, v);
    }
  };
}

const std::vector<std::pair<std::string, Setter>>& setters() {
  static const std::vector<std::pair<std::string, Setter>> table = {
      {"threshold", planner(&PlannerConfig::threshold)},
      {"planning_range", planner(&PlannerConfig::planning_range)},
      {"sensor_range_max", planner(&PlannerConfig::sensor_range_max)},
      {"fov_deg", planner(&PlannerConfig::fov_deg)},
      {"samples", planner(&PlannerConfig::samples)},
      {"raw_beams", planner(&PlannerConfig::raw_beams)},
      {"epsilon", planner(&PlannerConfig::epsilon)},
      {"d_safe", planner(&PlannerConfig::d_safe)},
      {"lambda_dist", planner(&PlannerConfig::lambda_dist)},
      {"robot_radius", planner(&PlannerConfig::robot_radius)},
      {"replan_period", planner(&PlannerConfig::replan_period)},
      {"v_max", planner(&PlannerConfig::v_max)},
      {"lpf_cutoff", planner(&PlannerConfig::lpf_cutoff)},
      {"window_length", planner(&PlannerConfig::window_length)},
      {"window_width", planner(&PlannerConfig::window_width)},
      {"window_height", planner(&PlannerConfig::window_height)},
      {"hit_increment", sensor(&SensorModel::hit_increment)},
      {"miss_decrement", sensor(&SensorModel::miss_decrement)},
      {"initial_probability", sensor(&SensorModel::initial_probability)},
      {"scan_noise", sensor(&SensorModel::range_noise)},
      {"pose_noise", num(&SimConfig::pose_noise)},
      {"time_limit", num(&SimConfig::time_limit)},
      {"home_tolerance", num(&SimConfig::home_tolerance)},
      {"max_ticks", num(&SimConfig::max_ticks)},
      {"stuck_ticks", num(&SimConfig::stuck_ticks)},
      {"stuck_distance", num(&SimConfig::stuck_distance)},
      {"dead_end_ticks", num(&SimConfig::dead_end_ticks)},
      {"return_lookahead", num(&SimConfig::return_lookahead)},
      {"baseline", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.sim.use_baseline = to_bool(k, v);
       }},
      {"map", [](RunConfig& c, const std::string&, const std::string& v) { c.map_path = v; }},
      {"seeds", [](RunConfig& c, const std::string&, const std::string& v) {
         c.seeds = parse_seed_list(v);
       }},
      {"output", [](RunConfig& c, const std::string&, const std::string& v) { c.output_dir = v; }},
      {"resolution", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.resolution = to_double(k, v);
       }},
  };
  return table;
}

std::string fixed(double v, int precision) {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(precision) << v;
  return ss.str();
}

// 10 m x 10 m room with a 2 m-pitch pillar lattice, written into `grid`
// with its lower-left corner at cell (0, 0).
void draw_pillar_room(BooleanGrid& grid) {
  for (int r = 0; r < 100; ++r) {
    for (int c = 0; c < 100; ++c) {
      const bool wall = r == 0 || c == 0 || r == 99 || c == 99;
      const bool pillar = r >= 15 && c >= 25 && r < 90 && c < 90 && (r - 15) % 20 < 4 &&
                          (c - 25) % 20 < 4;
      if (wall || pillar) grid.set({r, c}, true);
    }
  }
}

}  // namespace

const std::vector<std::string>& setting_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [name, _] : setters()) k.push_back(name);
    return k;
  }();
  return keys;
}

void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value) {
  for (const auto& [name, set] : setters()) {
    if (name == key) {
      set(cfg, key, value);
      return;
    }
  }
  throw ConfigError("unknown setting '" + key + "'");
}

void apply_settings(RunConfig& cfg, const std::map<std::string, std::string>& kv) {
  for (const auto& [k, v] : kv) apply_setting(cfg, k, v);
}

RunConfig load_run_config(const std::string& path) {
  RunConfig cfg;
  apply_settings(cfg, io::read_key_values(path));
  // Relative map paths resolve against the config file's directory.
  if (!cfg.map_path.empty() && std::filesystem::path(cfg.map_path).is_relative() &&
      !std::filesystem::exists(cfg.map_path)) {
    const auto alt = std::filesystem::path(path).parent_path() / cfg.map_path;
    if (std::filesystem::exists(alt)) cfg.map_path = alt.string();
  }
  return cfg;
}

void validate_run_config(const RunConfig& cfg, bool need_map) {
  cfg.sim.validate();
  if (!(cfg.resolution > 0.0)) throw ConfigError("resolution must be positive");
  if (need_map) {
    if (cfg.map_path.empty()) throw ConfigError("no map given");
    if (!std::filesystem::exists(cfg.map_path)) {
      throw ConfigError("map file '" + cfg.map_path + "' does not exist");
    }
  }
  if (cfg.seeds.empty()) throw ConfigError("seed list is empty");
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, ',')) {
    const auto b = token.find_first_not_of(' ');
    const auto e = token.find_last_not_of(' ');
    if (b == std::string::npos) continue;
    token = token.substr(b, e - b + 1);
    const auto dash = token.find('-', 1);
    auto parse = [&](const std::string& s) {
      std::uint64_t v = 0;
      auto res = std::from_chars(s.data(), s.data() + s.size(), v);
      if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw ConfigError("bad seed '" + s + "'");
      }
      return v;
    };
    if (dash != std::string::npos) {
      const auto lo = parse(token.substr(0, dash));
      const auto hi = parse(token.substr(dash + 1));
      if (hi < lo) throw ConfigError("bad seed range '" + token + "'");
      for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
    } else {
      seeds.push_back(parse(token));
    }
  }
  return seeds;
}

World make_world(const io::MapFile& map, double threshold) {
  if (!map.start) throw ConfigError("map has no start marker");
  BooleanGrid truth(map.grid.geometry());
  const auto& cells = map.grid.cells();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (cells[i] == OccupancyGrid::kUnknown || cells[i] > threshold) {
      truth.set(map.grid.geometry().cell_of(i), true);
    }
  }
  return World(std::move(truth), *map.start);
}

World load_world(const std::string& path, double resolution, double threshold) {
  return make_world(io::load_map(path, resolution), threshold);
}

Stats summarize(const std::vector<double>& values) {
  Stats s;
  s.count = values.size();
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.avg = sum / static_cast<double>(values.size());
  double sq = 0.0;
  for (double v : values) sq += (v - s.avg) * (v - s.avg);
  s.std = values.size() > 1 ? std::sqrt(sq / static_cast<double>(values.size() - 1)) : 0.0;
  s.max = *std::max_element(values.begin(), values.end());
  s.min = *std::min_element(values.begin(), values.end());
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  s.median = n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  return s;
}

std::vector<EpisodeLog> run_seeds(const World& world, const SimConfig& cfg,
                                  const std::vector<std::uint64_t>& seeds) {
  std::vector<std::future<EpisodeLog>> jobs;
  jobs.reserve(seeds.size());
  for (const auto seed : seeds) {
    jobs.push_back(std::async(std::launch::async,
                              [&world, &cfg, seed] { return run_episode(world, cfg, seed); }));
  }
  std::vector<EpisodeLog> logs;
  logs.reserve(seeds.size());
  for (auto& j : jobs) logs.push_back(j.get());
  return logs;
}

std::string format_summary_table(const std::string& method, const std::string& map_name,
                                 const std::vector<EpisodeLog>& logs) {
  std::vector<double> times;
  std::vector<double> dist;
  std::vector<double> cov;
  std::vector<double> home;
  for (const auto& l : logs) {
    times.push_back(l.summary.exploration_time);
    dist.push_back(l.summary.distance);
    cov.push_back(l.summary.coverage);
    home.push_back(l.summary.home_error);
  }
  const Stats t = summarize(times);
  std::ostringstream out;
  out << std::left << std::setw(10) << "Method" << std::setw(16) << "Map" << std::right
      << std::setw(9) << "Avg(s)" << std::setw(9) << "Std" << std::setw(9) << "Max"
      << std::setw(9) << "Min" << std::setw(11) << "Dist(m)" << std::setw(10) << "Cov(%)"
      << std::setw(11) << "Home(m)" << "\n";
  out << std::left << std::setw(10) << method << std::setw(16) << map_name << std::right
      << std::setw(9) << fixed(t.avg, 2) << std::setw(9) << fixed(t.std, 2) << std::setw(9)
      << fixed(t.max, 2) << std::setw(9) << fixed(t.min, 2) << std::setw(11)
      << fixed(summarize(dist).avg, 2) << std::setw(10) << fixed(summarize(cov).avg, 1)
      << std::setw(11) << fixed(summarize(home).avg, 3) << "\n";
  return out.str();
}

BenchRow bench_method(const std::string& method, const std::string& map_name, const World& world,
                      const SimConfig& cfg, const std::vector<std::uint64_t>& seeds) {
  const auto logs = run_seeds(world, cfg, seeds);
  BenchRow row;
  row.method = method;
  row.map = map_name;
  row.seeds = seeds;
  std::vector<double> times;
  std::vector<double> dist;
  std::vector<double> plan_us;
  row.min_clearance = std::numeric_limits<double>::infinity();
  for (const auto& l : logs) {
    times.push_back(l.summary.exploration_time);
    dist.push_back(l.summary.distance);
    row.min_clearance = std::min(row.min_clearance, l.summary.min_true_clearance);
    row.safety_violations += l.summary.safety_violations;
    if (l.summary.failed || l.summary.final_mode == Mode::kStuck) ++row.failures;
    for (const auto& r : l.records) plan_us.push_back(r.plan_seconds * 1e6);
  }
  row.exploration_time = summarize(times);
  row.distance = summarize(dist);
  row.plan_time_us = summarize(plan_us);
  return row;
}

std::pair<World, World> make_scaling_worlds() {
  GridGeometry small_g{100, 100, 0.1, {0.0, 0.0}};
  GridGeometry large_g{2000, 2000, 0.1, {0.0, 0.0}};
  BooleanGrid small(small_g);
  BooleanGrid large(large_g);
  draw_pillar_room(small);
  draw_pillar_room(large);
  for (int i = 0; i < 2000; ++i) {
    large.set({0, i}, true);
    large.set({1999, i}, true);
    large.set({i, 0}, true);
    large.set({i, 1999}, true);
  }
  const Pose start(1.05, 1.05, 0.0, 0.7853981633974483);
  return {World(std::move(small), start), World(std::move(large), start)};
}

ScalingResult measure_plan_time_scaling(const SimConfig& cfg, std::size_t min_ticks) {
  const auto [small, large] = make_scaling_worlds();
  auto collect = [&](const World& w) {
    std::vector<double> us;
    std::uint64_t seed = 1;
    while (us.size() < min_ticks) {
      const EpisodeLog log = run_episode(w, cfg, seed++);
      for (const auto& r : log.records) us.push_back(r.plan_seconds * 1e6);
      if (log.records.empty()) break;
    }
    return us;
  };
  // Warm-up so first-touch allocation cost lands on neither measurement.
  run_episode(small, cfg, 0);
  const auto s = collect(small);
  const auto l = collect(large);
  ScalingResult out;
  out.small_ticks = s.size();
  out.large_ticks = l.size();
  out.small_median_us = summarize(s).median;
  out.large_median_us = summarize(l).median;
  return out;
}

std::string format_bench_csv(const BenchReport& report) {
  std::string out =
      "method,map,seeds,time_avg,time_std,time_max,time_min,min_clearance,distance_avg,"
      "plan_us_median,plan_us_avg,plan_us_max,failures,safety_violations\n";
  for (const auto& r : report.rows) {
    out += r.method + "," + r.map + "," + std::to_string(r.seeds.size()) + "," +
           fixed(r.exploration_time.avg, 3) + "," + fixed(r.exploration_time.std, 3) + "," +
           fixed(r.exploration_time.max, 3) + "," + fixed(r.exploration_time.min, 3) + "," +
           fixed(r.min_clearance, 3) + "," + fixed(r.distance.avg, 3) + "," +
           fixed(r.plan_time_us.median, 1) + "," + fixed(r.plan_time_us.avg, 1) + "," +
           fixed(r.plan_time_us.max, 1) + "," + std::to_string(r.failures) + "," +
           std::to_string(r.safety_violations) + "\n";
  }
  return out;
}

std::string format_bench_table(const BenchReport& report) {
  std::ostringstream out;
  out << std::left << std::setw(10) << "Method" << std::setw(16) << "Map" << std::right
      << std::setw(9) << "Avg(s)" << std::setw(8) << "Std" << std::setw(9) << "Max"
      << std::setw(9) << "Min" << std::setw(11) << "MinClr(m)" << std::setw(10) << "Dist(m)"
      << std::setw(12) << "Plan(us)" << std::setw(6) << "Fail" << "\n";
  for (const auto& r : report.rows) {
    out << std::left << std::setw(10) << r.method << std::setw(16) << r.map << std::right
        << std::setw(9) << fixed(r.exploration_time.avg, 2) << std::setw(8)
        << fixed(r.exploration_time.std, 2) << std::setw(9) << fixed(r.exploration_time.max, 2)
        << std::setw(9) << fixed(r.exploration_time.min, 2) << std::setw(11)
        << fixed(r.min_clearance, 3) << std::setw(10) << fixed(r.distance.avg, 1)
        << std::setw(12) << fixed(r.plan_time_us.median, 1) << std::setw(6) << r.failures << "\n";
  }
  if (report.scaling.small_ticks > 0) {
    out << "\nPer-tick plan time (median): 100x100 " << fixed(report.scaling.small_median_us, 1)
        << " us over " << report.scaling.small_ticks << " ticks, 2000x2000 "
        << fixed(report.scaling.large_median_us, 1) << " us over " << report.scaling.large_ticks
        << " ticks, ratio " << fixed(report.scaling.ratio(), 3) << "\n";
  }
  return out.str();
}

}  // namespace lwa::harness
