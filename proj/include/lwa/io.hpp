#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lwa/geometry.hpp"
#include "lwa/grid.hpp"
#include "lwa/planner.hpp"
#include "lwa/sim.hpp"

namespace lwa::io {

/// Map plus the optional markers a map file can carry.
struct MapFile {
  OccupancyGrid grid;
  std::optional<Pose> start;
  std::optional<Vec2> goal;
};

/// Flat `key: value` / `key = value` text, '#' starts a comment.
std::map<std::string, std::string> read_key_values(const std::string& path);
std::map<std::string, std::string> parse_key_values(const std::string& text,
                                                    const std::string& source);

/// ASCII map: one character per cell, first line is the top (highest y) row.
///   '#' occupied, '.' free, 'S' start (free), 'G' goal (free), '?' unknown.
/// Resolution and origin come from `<path>.meta` when present.
MapFile parse_ascii_map(const std::string& text, double resolution, const Vec2& origin,
                        const std::string& source = "<ascii>");
std::string format_ascii_map(const OccupancyGrid& grid, double threshold);

/// Binary PGM (P5, maxval 255). Pixel 0 = probability 100, 255 = 0, 205 =
/// unknown, linear in between; the first image row is the top of the map.
MapFile parse_pgm_map(const std::string& bytes, double resolution, const Vec2& origin,
                      const std::string& source = "<pgm>");
std::string format_pgm(const OccupancyGrid& grid);
std::uint8_t probability_to_pixel(std::int8_t value);
std::int8_t pixel_to_probability(std::uint8_t pixel);

/// Loads `.pgm` as PGM and anything else as ASCII, applying the sidecar
/// `<path>.meta` (resolution, origin_x, origin_y, start_x, start_y,
/// start_yaw) when it exists.
MapFile load_map(const std::string& path, double default_resolution = 0.1);
void save_map_pgm(const std::string& path, const OccupancyGrid& grid);

/// Raw bytes of an 8-bit grayscale image, top row first.
std::string format_gray_pgm(int width, int height, const std::vector<std::uint8_t>& pixels);

/// ESDF render: d clamped to [-d_safe, 2*d_safe] and mapped linearly to 0..255.
std::vector<std::uint8_t> render_esdf(const EsdfGrid& esdf, double d_safe);
/// ESDF render with the path cells drawn black.
std::vector<std::uint8_t> render_overlay(const EsdfGrid& esdf, const std::vector<Vec2>& points,
                                         double d_safe);

/// CSV: header line, geometry line, then one line per grid row from the top.
/// Values are written with round-trip precision.
std::string format_esdf_csv(const EsdfGrid& esdf);
EsdfGrid parse_esdf_csv(const std::string& text, const std::string& source = "<csv>");

std::string format_path_csv(const GridPath& path);
struct PathCsv {
  std::vector<PathNode> nodes;
  bool surrogate = false;
  double total_cost = 0.0;
};
PathCsv parse_path_csv(const std::string& text, const std::string& source = "<csv>");

std::string format_episode_csv(const EpisodeLog& log);
std::string format_timing_csv(const EpisodeLog& log);

/// Golden end-point scenario: pose, one full scan and the accepted regions.
struct Box {
  double xmin, ymin, xmax, ymax;
  bool contains(const Vec2& p) const {
    return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax;
  }
};
struct Scenario {
  std::string name;
  Pose pose;
  double fov_deg = 240.0;
  std::vector<double> ranges;
  std::vector<Box> regions;
};
Scenario parse_scenario(const std::string& text, const std::string& source = "<scenario>");
std::string format_scenario(const Scenario& s);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& bytes);

}  // namespace lwa::io
