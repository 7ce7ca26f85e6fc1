#include "lwa/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lwa/errors.hpp"

namespace lwa::io {

namespace {

std::string fmt(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out.push_back(line);
  }
  return out;
}

double parse_double(const std::string& token, const std::string& where) {
  const std::string t = trim(token);
  double v = 0.0;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  if (!t.empty() && t[0] == '+') ++first;
  auto res = std::from_chars(first, last, v);
  if (t.empty() || res.ec != std::errc() || res.ptr != last) {
    throw ParseError(where + ": expected a number, got '" + t + "'");
  }
  return v;
}

int parse_int(const std::string& token, const std::string& where) {
  const std::string t = trim(token);
  int v = 0;
  auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size()) {
    throw ParseError(where + ": expected an integer, got '" + t + "'");
  }
  return v;
}

std::string at_line(const std::string& source, std::size_t line) {
  return source + ":" + std::to_string(line);
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& bytes) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << bytes;
  if (!out) throw ConfigError("write failed for '" + path + "'");
}

std::map<std::string, std::string> parse_key_values(const std::string& text,
                                                    const std::string& source) {
  std::map<std::string, std::string> kv;
  const auto lines = lines_of(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string line = lines[i];
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto sep = line.find_first_of(":=");
    if (sep == std::string::npos) {
      throw ParseError(at_line(source, i + 1) + ": expected 'key: value'");
    }
    const std::string key = trim(line.substr(0, sep));
    if (key.empty()) throw ParseError(at_line(source, i + 1) + ": empty key");
    kv[key] = trim(line.substr(sep + 1));
  }
  return kv;
}

std::map<std::string, std::string> read_key_values(const std::string& path) {
  return parse_key_values(read_file(path), path);
}

MapFile parse_ascii_map(const std::string& text, double resolution, const Vec2& origin,
                        const std::string& source) {
  std::vector<std::string> rows;
  for (auto& l : lines_of(text)) {
    if (!l.empty()) rows.push_back(l);
  }
  if (rows.empty()) throw ParseError(source + ": map is empty");
  const std::size_t width = rows.front().size();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != width) {
      throw ParseError(at_line(source, i + 1) + ": row has " + std::to_string(rows[i].size()) +
                       " cells, expected " + std::to_string(width));
    }
  }
  GridGeometry g;
  g.width = static_cast<int>(width);
  g.height = static_cast<int>(rows.size());
  g.resolution = resolution;
  g.origin = origin;
  MapFile out;
  out.grid = OccupancyGrid(g);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const int row = g.height - 1 - static_cast<int>(i);
    for (std::size_t j = 0; j < width; ++j) {
      const Cell c{row, static_cast<int>(j)};
      switch (rows[i][j]) {
        case '#': out.grid.set(c, 100); break;
        case '.': out.grid.set(c, 0); break;
        case '?': break;
        case 'S':
          out.grid.set(c, 0);
          if (!out.start) {
            const Vec2 p = g.cell_center(c);
            out.start = Pose(p.x, p.y);
          }
          break;
        case 'G':
          out.grid.set(c, 0);
          if (!out.goal) out.goal = g.cell_center(c);
          break;
        default:
          throw ParseError(at_line(source, i + 1) + ", column " + std::to_string(j + 1) +
                           ": unexpected character '" + std::string(1, rows[i][j]) + "'");
      }
    }
  }
  return out;
}

std::string format_ascii_map(const OccupancyGrid& grid, double threshold) {
  std::string out;
  for (int row = grid.height() - 1; row >= 0; --row) {
    for (int col = 0; col < grid.width(); ++col) {
      const auto v = grid.at({row, col});
      out.push_back(v == OccupancyGrid::kUnknown ? '?' : (v > threshold ? '#' : '.'));
    }
    out.push_back('\n');
  }
  return out;
}

std::uint8_t probability_to_pixel(std::int8_t value) {
  if (value == OccupancyGrid::kUnknown) return 205;
  return static_cast<std::uint8_t>(std::lround(255.0 - value * 2.55));
}

std::int8_t pixel_to_probability(std::uint8_t pixel) {
  if (pixel == 205) return OccupancyGrid::kUnknown;
  return static_cast<std::int8_t>(std::lround((255.0 - pixel) / 2.55));
}

std::string format_gray_pgm(int width, int height, const std::vector<std::uint8_t>& pixels) {
  std::string out = "P5\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
  out.append(reinterpret_cast<const char*>(pixels.data()), pixels.size());
  return out;
}

std::string format_pgm(const OccupancyGrid& grid) {
  std::vector<std::uint8_t> px;
  px.reserve(grid.geometry().cell_count());
  for (int row = grid.height() - 1; row >= 0; --row) {
    for (int col = 0; col < grid.width(); ++col) px.push_back(probability_to_pixel(grid.at({row, col})));
  }
  return format_gray_pgm(grid.width(), grid.height(), px);
}

MapFile parse_pgm_map(const std::string& bytes, double resolution, const Vec2& origin,
                      const std::string& source) {
  std::size_t pos = 0;
  auto fail = [&](const std::string& what) {
    throw ParseError(source + ": byte " + std::to_string(pos) + ": " + what);
  };
  auto skip_space = [&] {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
        ++pos;
      } else {
        break;
      }
    }
  };
  auto read_number = [&]() -> int {
    skip_space();
    const std::size_t begin = pos;
    while (pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos]))) ++pos;
    if (begin == pos) fail("expected a header number");
    return std::stoi(bytes.substr(begin, pos - begin));
  };
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') fail("missing P5 magic");
  pos = 2;
  const int w = read_number();
  const int h = read_number();
  const int maxval = read_number();
  if (w < 1 || h < 1) fail("image dimensions must be positive");
  if (maxval != 255) fail("maxval must be 255");
  if (pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[pos]))) {
    fail("expected whitespace after header");
  }
  ++pos;
  const std::size_t need = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  if (bytes.size() - pos < need) {
    fail("pixel data truncated: need " + std::to_string(need) + " bytes, have " +
         std::to_string(bytes.size() - pos));
  }
  GridGeometry g;
  g.width = w;
  g.height = h;
  g.resolution = resolution;
  g.origin = origin;
  MapFile out;
  out.grid = OccupancyGrid(g);
  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < w; ++j) {
      const auto px = static_cast<std::uint8_t>(bytes[pos + static_cast<std::size_t>(i) * w + j]);
      out.grid.set({h - 1 - i, j}, pixel_to_probability(px));
    }
  }
  return out;
}

MapFile load_map(const std::string& path, double default_resolution) {
  std::map<std::string, std::string> meta;
  const std::string meta_path = path + ".meta";
  if (std::filesystem::exists(meta_path)) meta = read_key_values(meta_path);
  auto get = [&](const std::string& key, double fallback) {
    const auto it = meta.find(key);
    return it == meta.end() ? fallback : parse_double(it->second, meta_path + " key " + key);
  };
  const double res = get("resolution", default_resolution);
  if (!(res > 0.0)) throw ConfigError(meta_path + ": resolution must be positive");
  const Vec2 origin{get("origin_x", 0.0), get("origin_y", 0.0)};
  const std::string bytes = read_file(path);
  const bool pgm = std::filesystem::path(path).extension() == ".pgm";
  MapFile m = pgm ? parse_pgm_map(bytes, res, origin, path) : parse_ascii_map(bytes, res, origin, path);
  if (meta.count("start_x") && meta.count("start_y")) {
    m.start = Pose(get("start_x", 0.0), get("start_y", 0.0), 0.0, get("start_yaw", 0.0));
  } else if (m.start && meta.count("start_yaw")) {
    m.start->yaw = wrap_angle(get("start_yaw", 0.0));
  }
  return m;
}

void save_map_pgm(const std::string& path, const OccupancyGrid& grid) {
  write_file(path, format_pgm(grid));
  const auto& g = grid.geometry();
  write_file(path + ".meta", "resolution: " + fmt(g.resolution) + "\norigin_x: " +
                                 fmt(g.origin.x) + "\norigin_y: " + fmt(g.origin.y) + "\n");
}

std::vector<std::uint8_t> render_esdf(const EsdfGrid& esdf, double d_safe) {
  std::vector<std::uint8_t> px;
  px.reserve(esdf.geometry().cell_count());
  const double lo = -d_safe;
  const double hi = 2.0 * d_safe;
  for (int row = esdf.height() - 1; row >= 0; --row) {
    for (int col = 0; col < esdf.width(); ++col) {
      const double d = std::clamp(esdf.at({row, col}), lo, hi);
      px.push_back(static_cast<std::uint8_t>(std::lround((d - lo) / (hi - lo) * 255.0)));
    }
  }
  return px;
}

std::vector<std::uint8_t> render_overlay(const EsdfGrid& esdf, const std::vector<Vec2>& points,
                                         double d_safe) {
  auto px = render_esdf(esdf, d_safe);
  const auto& g = esdf.geometry();
  for (const Vec2& p : points) {
    if (const auto c = g.world_to_cell_checked(p)) {
      const std::size_t img_row = static_cast<std::size_t>(g.height - 1 - c->row);
      px[img_row * static_cast<std::size_t>(g.width) + static_cast<std::size_t>(c->col)] = 0;
    }
  }
  return px;
}

std::string format_esdf_csv(const EsdfGrid& esdf) {
  const auto& g = esdf.geometry();
  std::string out = "width,height,resolution,origin_x,origin_y\n";
  out += std::to_string(g.width) + "," + std::to_string(g.height) + "," + fmt(g.resolution) + "," +
         fmt(g.origin.x) + "," + fmt(g.origin.y) + "\n";
  for (int row = g.height - 1; row >= 0; --row) {
    for (int col = 0; col < g.width; ++col) {
      if (col > 0) out.push_back(',');
      out += fmt(esdf.at({row, col}));
    }
    out.push_back('\n');
  }
  return out;
}

EsdfGrid parse_esdf_csv(const std::string& text, const std::string& source) {
  const auto lines = lines_of(text);
  if (lines.size() < 2 || trim(lines[0]) != "width,height,resolution,origin_x,origin_y") {
    throw ParseError(at_line(source, 1) + ": missing ESDF CSV header");
  }
  const auto head = split(lines[1], ',');
  if (head.size() != 5) throw ParseError(at_line(source, 2) + ": expected 5 geometry fields");
  GridGeometry g;
  g.width = parse_int(head[0], at_line(source, 2));
  g.height = parse_int(head[1], at_line(source, 2));
  g.resolution = parse_double(head[2], at_line(source, 2));
  g.origin = {parse_double(head[3], at_line(source, 2)), parse_double(head[4], at_line(source, 2))};
  if (g.width < 1 || g.height < 1) throw ParseError(at_line(source, 2) + ": bad dimensions");
  if (lines.size() < 2 + static_cast<std::size_t>(g.height)) {
    throw ParseError(source + ": expected " + std::to_string(g.height) + " data rows");
  }
  std::vector<double> d(g.cell_count());
  for (int i = 0; i < g.height; ++i) {
    const std::size_t ln = 2 + static_cast<std::size_t>(i);
    const auto cells = split(lines[ln], ',');
    if (cells.size() != static_cast<std::size_t>(g.width)) {
      throw ParseError(at_line(source, ln + 1) + ": expected " + std::to_string(g.width) + " values");
    }
    const int row = g.height - 1 - i;
    for (int col = 0; col < g.width; ++col) {
      d[g.index({row, col})] = parse_double(cells[static_cast<std::size_t>(col)], at_line(source, ln + 1));
    }
  }
  return EsdfGrid(g, std::move(d));
}

std::string format_path_csv(const GridPath& path) {
  std::string out = "# surrogate=" + std::string(path.surrogate ? "1" : "0") +
                    " total_cost=" + fmt(path.total_cost) + " length=" + fmt(path.length) + "\n";
  out += "index,row,col,x,y,depth,g,weighted_h,f_dist\n";
  for (std::size_t i = 0; i < path.nodes.size(); ++i) {
    const auto& n = path.nodes[i];
    out += std::to_string(i) + "," + std::to_string(n.cell.row) + "," + std::to_string(n.cell.col) +
           "," + fmt(n.world.x) + "," + fmt(n.world.y) + "," + std::to_string(n.depth) + "," +
           fmt(n.g) + "," + fmt(n.weighted_h) + "," + fmt(n.f_dist) + "\n";
  }
  return out;
}

PathCsv parse_path_csv(const std::string& text, const std::string& source) {
  PathCsv out;
  const auto lines = lines_of(text);
  bool header_seen = false;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string line = trim(lines[i]);
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ss(line.substr(1));
      std::string tok;
      while (ss >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = tok.substr(0, eq);
        const std::string val = tok.substr(eq + 1);
        if (key == "surrogate") out.surrogate = val == "1";
        if (key == "total_cost") out.total_cost = parse_double(val, at_line(source, i + 1));
      }
      continue;
    }
    if (!header_seen) {
      if (line != "index,row,col,x,y,depth,g,weighted_h,f_dist") {
        throw ParseError(at_line(source, i + 1) + ": unexpected path CSV header");
      }
      header_seen = true;
      continue;
    }
    const auto f = split(line, ',');
    const std::string where = at_line(source, i + 1);
    if (f.size() != 9) throw ParseError(where + ": expected 9 fields");
    PathNode n;
    n.cell = {parse_int(f[1], where), parse_int(f[2], where)};
    n.world = {parse_double(f[3], where), parse_double(f[4], where)};
    n.depth = parse_int(f[5], where);
    n.g = parse_double(f[6], where);
    n.weighted_h = parse_double(f[7], where);
    n.f_dist = parse_double(f[8], where);
    out.nodes.push_back(n);
  }
  if (!header_seen) throw ParseError(source + ": missing path CSV header");
  return out;
}

std::string format_episode_csv(const EpisodeLog& log) {
  std::string out =
      "tick,time,mode,x,y,yaw,goal_x,goal_y,path_length,min_clearance,surrogate,displacement,"
      "true_clearance,event\n";
  for (const auto& r : log.records) {
    out += std::to_string(r.tick) + "," + fmt(r.time) + "," + mode_name(r.mode) + "," +
           fmt(r.pose.x) + "," + fmt(r.pose.y) + "," + fmt(r.pose.yaw) + "," + fmt(r.goal.x) + "," +
           fmt(r.goal.y) + "," + fmt(r.path_length) + "," + fmt(r.min_clearance) + "," +
           (r.surrogate ? "1" : "0") + "," + fmt(r.displacement) + "," + fmt(r.true_clearance) +
           "," + r.event + "\n";
  }
  return out;
}

std::string format_timing_csv(const EpisodeLog& log) {
  std::string out = "tick,plan_seconds\n";
  for (const auto& r : log.records) out += std::to_string(r.tick) + "," + fmt(r.plan_seconds) + "\n";
  return out;
}

Scenario parse_scenario(const std::string& text, const std::string& source) {
  Scenario s;
  std::size_t expected = 0;
  bool have_pose = false;
  const auto lines = lines_of(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string line = lines[i];
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::vector<std::string> tok;
    for (std::string t; ss >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    const std::string where = at_line(source, i + 1);
    const std::string& key = tok[0];
    if (expected > s.ranges.size() && key != "name" && key != "pose" && key != "fov" &&
        key != "region" && key != "ranges") {
      for (const auto& t : tok) s.ranges.push_back(parse_double(t, where));
      continue;
    }
    if (key == "name" && tok.size() == 2) {
      s.name = tok[1];
    } else if (key == "pose" && tok.size() == 5) {
      s.pose = Pose(parse_double(tok[1], where), parse_double(tok[2], where),
                    parse_double(tok[3], where), parse_double(tok[4], where));
      have_pose = true;
    } else if (key == "fov" && tok.size() == 2) {
      s.fov_deg = parse_double(tok[1], where);
    } else if (key == "region" && tok.size() == 5) {
      s.regions.push_back({parse_double(tok[1], where), parse_double(tok[2], where),
                           parse_double(tok[3], where), parse_double(tok[4], where)});
    } else if (key == "ranges" && tok.size() == 2) {
      expected = static_cast<std::size_t>(parse_int(tok[1], where));
    } else {
      throw ParseError(where + ": unrecognised scenario line '" + trim(lines[i]) + "'");
    }
  }
  if (!have_pose) throw ParseError(source + ": missing pose line");
  if (s.ranges.size() != expected) {
    throw ParseError(source + ": expected " + std::to_string(expected) + " ranges, read " +
                     std::to_string(s.ranges.size()));
  }
  if (s.regions.empty()) throw ParseError(source + ": no region lines");
  return s;
}

std::string format_scenario(const Scenario& s) {
  std::string out = "name " + (s.name.empty() ? std::string("unnamed") : s.name) + "\n";
  out += "pose " + fmt(s.pose.x) + " " + fmt(s.pose.y) + " " + fmt(s.pose.z) + " " + fmt(s.pose.yaw) + "\n";
  out += "fov " + fmt(s.fov_deg) + "\n";
  for (const auto& b : s.regions) {
    out += "region " + fmt(b.xmin) + " " + fmt(b.ymin) + " " + fmt(b.xmax) + " " + fmt(b.ymax) + "\n";
  }
  out += "ranges " + std::to_string(s.ranges.size()) + "\n";
  for (std::size_t i = 0; i < s.ranges.size(); ++i) {
    out += fmt(s.ranges[i]);
    out.push_back((i + 1) % 12 == 0 || i + 1 == s.ranges.size() ? '\n' : ' ');
  }
  return out;
}

}  // namespace lwa::io
