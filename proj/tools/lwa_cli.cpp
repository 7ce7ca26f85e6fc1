// Command-line front end: edt, plan, explore, bench, render.

#include <algorithm>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lwa/errors.hpp"
#include "lwa/grid.hpp"
#include "lwa/harness.hpp"
#include "lwa/io.hpp"
#include "lwa/planner.hpp"
#include "lwa/sim.hpp"

#ifndef LWA_MAPS_DIR
#define LWA_MAPS_DIR "maps"
#endif

namespace fs = std::filesystem;
using namespace lwa;

namespace {

const std::vector<std::string> kBundledMaps = {"corridor", "fork", "pillars", "junction",
                                               "dead_end", "loop"};

std::string dashed(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  return key;
}

// Registers one --flag per config key; values land in `overrides`.
void add_setting_flags(CLI::App* app, std::map<std::string, std::string>& overrides,
                       bool with_run_keys) {
  static const std::map<std::string, std::string> aliases = {
      {"lambda_dist", "--lambda"}, {"fov_deg", "--fov"}, {"robot_radius", "--r-robot"}};
  for (const auto& key : harness::setting_keys()) {
    const bool run_key = key == "map" || key == "seeds" || key == "output" || key == "baseline";
    if (run_key) continue;
    if (!with_run_keys && (key == "time_limit" || key == "max_ticks")) continue;
    std::string names = "--" + dashed(key);
    if (auto it = aliases.find(key); it != aliases.end()) names += "," + it->second;
    app->add_option_function<std::string>(
           names, [&overrides, key](const std::string& v) { overrides[key] = v; },
           "override " + key)
        ->group("Settings");
  }
}

Vec2 parse_point(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw ConfigError("expected x,y but got '" + text + "'");
  try {
    return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
  } catch (const std::exception&) {
    throw ConfigError("expected x,y but got '" + text + "'");
  }
}

std::string fixed(double v, int p) {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(p) << v;
  return ss.str();
}

int run_edt(const std::string& map_path, const std::string& out_dir,
            const std::map<std::string, std::string>& overrides) {
  harness::RunConfig cfg;
  harness::apply_settings(cfg, overrides);
  cfg.sim.planner.validate();
  const io::MapFile map = io::load_map(map_path, cfg.resolution);
  const EsdfGrid esdf =
      signed_distance_transform(threshold_occupancy(map.grid, cfg.sim.planner.threshold));
  const auto& g = esdf.geometry();
  io::write_file((fs::path(out_dir) / "esdf.pgm").string(),
                 io::format_gray_pgm(g.width, g.height, io::render_esdf(esdf, cfg.sim.planner.d_safe)));
  io::write_file((fs::path(out_dir) / "esdf.csv").string(), io::format_esdf_csv(esdf));
  const auto [lo, hi] = std::minmax_element(esdf.distances().begin(), esdf.distances().end());
  std::cout << "esdf " << g.width << "x" << g.height << " r=" << g.resolution
            << " min=" << fixed(*lo, 3) << " max=" << fixed(*hi, 3) << "\n"
            << "wrote " << (fs::path(out_dir) / "esdf.pgm").string() << ", "
            << (fs::path(out_dir) / "esdf.csv").string() << "\n";
  return harness::kExitOk;
}

int run_plan(const std::string& map_path, const std::string& start_text,
             const std::string& goal_text, bool baseline, const std::string& out_dir,
             const std::map<std::string, std::string>& overrides) {
  harness::RunConfig cfg;
  harness::apply_settings(cfg, overrides);
  cfg.sim.planner.validate();
  const PlannerConfig& pc = cfg.sim.planner;
  const io::MapFile map = io::load_map(map_path, cfg.resolution);

  Pose start;
  if (!start_text.empty()) {
    const Vec2 p = parse_point(start_text);
    start = Pose(p.x, p.y);
  } else if (map.start) {
    start = *map.start;
  } else {
    throw ConfigError("no --start given and the map has no 'S' marker");
  }
  Vec2 goal;
  if (!goal_text.empty()) {
    goal = parse_point(goal_text);
  } else if (map.goal) {
    goal = *map.goal;
  } else {
    throw ConfigError("no --goal given and the map has no 'G' marker");
  }
  if (!map.grid.geometry().world_to_cell_checked(goal)) {
    throw ConfigError("goal lies outside the map");
  }

  const BooleanGrid occ = threshold_occupancy(map.grid, pc.threshold);
  const EsdfGrid esdf = signed_distance_transform(occ);
  const GridPath path = baseline ? plan_baseline_astar(start, goal, occ, pc.robot_radius)
                                 : plan(start, goal, esdf, CostModel::from_config(pc));

  std::vector<Vec2> pts;
  for (const auto& n : path.nodes) pts.push_back(n.world);
  const auto& g = esdf.geometry();
  io::write_file((fs::path(out_dir) / "path.csv").string(), io::format_path_csv(path));
  io::write_file((fs::path(out_dir) / "overlay.pgm").string(),
                 io::format_gray_pgm(g.width, g.height, io::render_overlay(esdf, pts, pc.d_safe)));
  std::cout << (baseline ? "baseline" : "proposed") << " cells=" << path.nodes.size()
            << " length=" << fixed(path.length, 3) << " cost=" << fixed(path.total_cost, 3)
            << " min_clearance=" << fixed(path.min_clearance(esdf), 3)
            << " expansions=" << path.expansions << (path.surrogate ? " SURROGATE" : "") << "\n";
  if (path.surrogate) {
    std::cerr << "goal unreachable; wrote path to the closest reachable cell\n";
    return harness::kExitMissionFailure;
  }
  return harness::kExitOk;
}

int run_explore(harness::RunConfig cfg) {
  harness::validate_run_config(cfg, true);
  const World world = harness::load_world(cfg.map_path, cfg.resolution, cfg.sim.planner.threshold);
  const auto logs = harness::run_seeds(world, cfg.sim, cfg.seeds);
  const fs::path out(cfg.output_dir);
  bool failed = false;
  std::string summary_csv =
      "seed,final_mode,failed,ticks,exploration_time,distance,coverage,home_error,"
      "min_true_clearance,safety_violations\n";
  for (const auto& log : logs) {
    const auto& s = log.summary;
    const std::string tag = "seed" + std::to_string(s.seed);
    io::write_file((out / ("episode_" + tag + ".csv")).string(), io::format_episode_csv(log));
    io::write_file((out / ("timing_" + tag + ".csv")).string(), io::format_timing_csv(log));
    summary_csv += std::to_string(s.seed) + "," + mode_name(s.final_mode) + "," +
                   (s.failed ? "1" : "0") + "," + std::to_string(s.ticks) + "," +
                   fixed(s.exploration_time, 3) + "," + fixed(s.distance, 3) + "," +
                   fixed(s.coverage, 2) + "," + fixed(s.home_error, 4) + "," +
                   fixed(s.min_true_clearance, 3) + "," + std::to_string(s.safety_violations) + "\n";
    if (s.failed || s.final_mode == Mode::kStuck) failed = true;
    for (std::size_t i = 0; i < log.records.size(); ++i) {
      const auto& r = log.records[i];
      if (i > 0 && r.mode != log.records[i - 1].mode) {
        std::cout << "seed " << s.seed << ": " << mode_name(r.mode) << " at t=" << fixed(r.time, 1)
                  << "s (" << r.event << ")\n";
      }
    }
    std::cout << "seed " << s.seed << ": " << mode_name(s.final_mode)
              << (s.failed ? " (failed: " + s.failure + ")" : std::string()) << " t="
              << fixed(s.exploration_time, 1) << "s dist=" << fixed(s.distance, 1)
              << "m home_err=" << fixed(s.home_error, 3) << "m\n";
  }
  const std::string table = harness::format_summary_table(
      cfg.sim.use_baseline ? "baseline" : "proposed", fs::path(cfg.map_path).stem().string(), logs);
  io::write_file((out / "summary.csv").string(), summary_csv);
  io::write_file((out / "summary.txt").string(), table);
  std::cout << "\n" << table;
  return failed ? harness::kExitMissionFailure : harness::kExitOk;
}

int run_bench(const harness::RunConfig& cfg, std::vector<std::string> maps, std::size_t scale_ticks) {
  harness::validate_run_config(cfg, false);
  if (maps.empty()) {
    for (const auto& name : kBundledMaps) maps.push_back((fs::path(LWA_MAPS_DIR) / (name + ".txt")).string());
  }
  for (const auto& m : maps) {
    if (!fs::exists(m)) throw ConfigError("map file '" + m + "' does not exist");
  }
  harness::BenchReport report;
  for (const auto& m : maps) {
    const World world = harness::load_world(m, cfg.resolution, cfg.sim.planner.threshold);
    const std::string name = fs::path(m).stem().string();
    SimConfig proposed = cfg.sim;
    proposed.use_baseline = false;
    SimConfig base = cfg.sim;
    base.use_baseline = true;
    report.rows.push_back(harness::bench_method("proposed", name, world, proposed, cfg.seeds));
    report.rows.push_back(harness::bench_method("baseline", name, world, base, cfg.seeds));
    std::cerr << "bench: " << name << " done\n";
  }
  if (scale_ticks > 0) report.scaling = harness::measure_plan_time_scaling(cfg.sim, scale_ticks);
  const fs::path out(cfg.output_dir);
  io::write_file((out / "bench.csv").string(), harness::format_bench_csv(report));
  const std::string table = harness::format_bench_table(report);
  io::write_file((out / "bench.txt").string(), table);
  std::cout << table;
  for (const auto& r : report.rows) {
    if (r.failures > 0) return harness::kExitMissionFailure;
  }
  return harness::kExitOk;
}

std::vector<Vec2> read_log_points(const std::string& path) {
  std::istringstream in(io::read_file(path));
  std::string line;
  std::vector<Vec2> pts;
  if (!std::getline(in, line)) return pts;
  std::vector<std::string> header;
  {
    std::istringstream h(line);
    for (std::string f; std::getline(h, f, ',');) header.push_back(f);
  }
  const auto xi = std::find(header.begin(), header.end(), "x") - header.begin();
  const auto yi = std::find(header.begin(), header.end(), "y") - header.begin();
  if (xi >= static_cast<long>(header.size()) || yi >= static_cast<long>(header.size())) {
    throw ParseError(path + ":1: log has no x,y columns");
  }
  for (std::size_t ln = 2; std::getline(in, line); ++ln) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> f;
    std::istringstream s(line);
    for (std::string t; std::getline(s, t, ',');) f.push_back(t);
    if (static_cast<long>(f.size()) <= std::max(xi, yi)) {
      throw ParseError(path + ":" + std::to_string(ln) + ": too few fields");
    }
    try {
      pts.push_back({std::stod(f[static_cast<std::size_t>(xi)]), std::stod(f[static_cast<std::size_t>(yi)])});
    } catch (const std::exception&) {
      throw ParseError(path + ":" + std::to_string(ln) + ": bad coordinate");
    }
  }
  return pts;
}

int run_render(const std::string& map_path, const std::vector<std::string>& overlays,
               const std::string& out_file, const std::map<std::string, std::string>& overrides) {
  harness::RunConfig cfg;
  harness::apply_settings(cfg, overrides);
  const io::MapFile map = io::load_map(map_path, cfg.resolution);
  const EsdfGrid esdf =
      signed_distance_transform(threshold_occupancy(map.grid, cfg.sim.planner.threshold));
  std::vector<Vec2> pts;
  for (const auto& o : overlays) {
    const auto more = read_log_points(o);
    pts.insert(pts.end(), more.begin(), more.end());
  }
  const auto& g = esdf.geometry();
  io::write_file(out_file, io::format_gray_pgm(g.width, g.height,
                                               io::render_overlay(esdf, pts, cfg.sim.planner.d_safe)));
  std::cout << "wrote " << out_file << " (" << pts.size() << " overlay points)\n";
  return harness::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lightweight ESDF-weighted exploration planner and simulator"};
  app.require_subcommand(1);

  std::map<std::string, std::string> overrides;

  auto* edt = app.add_subcommand("edt", "Signed distance transform of a map (PGM render + CSV)");
  std::string edt_map;
  std::string edt_out = "out/edt";
  edt->add_option("map", edt_map, "map file (.pgm or ASCII)")->required();
  edt->add_option("--out", edt_out, "output directory");
  add_setting_flags(edt, overrides, false);

  auto* pl = app.add_subcommand("plan", "Single-shot plan over a whole map");
  std::string plan_map;
  std::string plan_start;
  std::string plan_goal;
  std::string plan_out = "out/plan";
  bool plan_baseline = false;
  pl->add_option("map", plan_map, "map file (.pgm or ASCII)")->required();
  pl->add_option("--start", plan_start, "start x,y in meters (default: map 'S')");
  pl->add_option("--goal", plan_goal, "goal x,y in meters (default: map 'G')");
  pl->add_flag("--baseline", plan_baseline, "plain A* without the clearance cost");
  pl->add_option("--out", plan_out, "output directory");
  add_setting_flags(pl, overrides, false);

  auto* ex = app.add_subcommand("explore", "Closed-loop exploration episodes");
  std::string ex_config;
  std::string ex_map;
  std::string ex_seeds;
  std::string ex_out;
  bool ex_baseline = false;
  ex->add_option("--config", ex_config, "key-value config file");
  ex->add_option("--map", ex_map, "world map file");
  ex->add_option("--seeds", ex_seeds, "seed list, e.g. 1,2,3 or 1-5");
  ex->add_option("--out", ex_out, "output directory");
  ex->add_flag("--baseline", ex_baseline, "plan with plain A*");
  add_setting_flags(ex, overrides, true);

  auto* be = app.add_subcommand("bench", "Proposed vs baseline over maps and seeds");
  std::vector<std::string> be_maps;
  std::string be_config;
  std::string be_seeds;
  std::string be_out;
  std::size_t be_scale_ticks = 200;
  be->add_option("--maps", be_maps, "map files (default: bundled maps)");
  be->add_option("--config", be_config, "key-value config file");
  be->add_option("--seeds", be_seeds, "seed list (default 1-5)");
  be->add_option("--out", be_out, "output directory (default out/bench)");
  be->add_option("--scale-ticks", be_scale_ticks, "ticks per world for the map-size timing (0 skips)");
  add_setting_flags(be, overrides, true);

  auto* re = app.add_subcommand("render", "Render a map's ESDF with optional path/log overlays");
  std::string re_map;
  std::vector<std::string> re_overlays;
  std::string re_out = "out/render.pgm";
  re->add_option("map", re_map, "map file")->required();
  re->add_option("--overlay", re_overlays, "path CSV or episode log CSV (x,y columns)");
  re->add_option("--out", re_out, "output PGM file");
  add_setting_flags(re, overrides, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return harness::kExitConfigError;
  }

  try {
    if (*edt) return run_edt(edt_map, edt_out, overrides);
    if (*pl) return run_plan(plan_map, plan_start, plan_goal, plan_baseline, plan_out, overrides);
    if (*ex) {
      harness::RunConfig cfg = ex_config.empty() ? harness::RunConfig{} : harness::load_run_config(ex_config);
      if (!ex_map.empty()) cfg.map_path = ex_map;
      if (!ex_seeds.empty()) cfg.seeds = harness::parse_seed_list(ex_seeds);
      if (!ex_out.empty()) cfg.output_dir = ex_out;
      if (ex_baseline) cfg.sim.use_baseline = true;
      harness::apply_settings(cfg, overrides);
      return run_explore(cfg);
    }
    if (*be) {
      harness::RunConfig cfg;
      if (be_config.empty()) {
        cfg.seeds = {1, 2, 3, 4, 5};
        cfg.output_dir = "out/bench";
      } else {
        cfg = harness::load_run_config(be_config);
      }
      if (!be_seeds.empty()) cfg.seeds = harness::parse_seed_list(be_seeds);
      if (!be_out.empty()) cfg.output_dir = be_out;
      harness::apply_settings(cfg, overrides);
      return run_bench(cfg, be_maps, be_scale_ticks);
    }
    if (*re) return run_render(re_map, re_overlays, re_out, overrides);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return harness::kExitConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return harness::kExitConfigError;
  }
  return harness::kExitConfigError;
}
