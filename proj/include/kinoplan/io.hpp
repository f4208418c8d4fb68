// Copyright 2026 The Kinoplan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Text file formats. Every file starts with a magic line "<name> v1".
//
//   pcmap v1     obstacle points, one "x y z" per line
//   traj v1      per segment: tau, start state, control, Taylor coefficients
//   scenario v1  scenario parameters, endpoints and the recommended config
//   runrec v1    config snapshot, scenario, stats and a fixed-dt trace
//   config       flat "key = value" planner settings (no magic line)
//
// Values that must survive a round trip (maps, trajectories, configs) are
// written in shortest round-trip form; derived reports (stats, traces, sweep
// tables) use 9 significant digits.

#ifndef KINOPLAN_IO_HPP
#define KINOPLAN_IO_HPP

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "kinoplan/refine.hpp"
#include "kinoplan/scenarios.hpp"

namespace kinoplan {

class FormatError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// numbers

/// Shortest decimal that parses back to the same double.
inline std::string format_exact(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

/// 9 significant digits.
inline std::string format_g9(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

inline double parse_double(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double x = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw FormatError("not a number: '" + std::string(s) + "'");
  return x;
}

inline std::vector<std::string> split_fields(std::string_view s, bool commas = true) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (std::isspace(static_cast<unsigned char>(ch)) || (commas && ch == ',')) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

inline std::vector<double> parse_doubles(std::string_view s) {
  std::vector<double> out;
  for (const auto& f : split_fields(s)) out.push_back(parse_double(f));
  return out;
}

/// "x y z" or "x,y,z"; a single value is broadcast to all three axes.
inline Vec3 parse_vec3(std::string_view s) {
  const auto v = parse_doubles(s);
  if (v.size() == 1) return Vec3::Constant(v[0]);
  if (v.size() != 3) throw FormatError("expected 3 values in '" + std::string(s) + "'");
  return Vec3(v[0], v[1], v[2]);
}

template <typename Format>
std::string join(const Vec3& v, Format fmt, const char* sep = " ") {
  return fmt(v.x()) + sep + fmt(v.y()) + sep + fmt(v.z());
}

inline std::string exact3(const Vec3& v) { return join(v, format_exact); }
inline std::string g9_3(const Vec3& v) { return join(v, format_g9); }

// ---------------------------------------------------------------------------
// files

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Writes through a sibling temporary and renames, so readers never see a
/// partial file.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw FormatError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw FormatError("cannot rename to " + path.string() + ": " + ec.message());
}

inline std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out.push_back(line);
  }
  return out;
}

inline std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

// ---------------------------------------------------------------------------
// sectioned key = value text

/// Ordered "key = value" pairs grouped under "[section]" headers. Keys before
/// the first header belong to section "". '#' starts a comment line.
struct KeyValueDoc {
  std::vector<std::pair<std::string, std::vector<std::pair<std::string, std::string>>>> sections;

  std::vector<std::pair<std::string, std::string>>* find(const std::string& name) {
    for (auto& [n, kv] : sections)
      if (n == name) return &kv;
    return nullptr;
  }
  const std::vector<std::pair<std::string, std::string>>* find(const std::string& name) const {
    for (const auto& [n, kv] : sections)
      if (n == name) return &kv;
    return nullptr;
  }
  std::vector<std::pair<std::string, std::string>>& section(const std::string& name) {
    if (auto* s = find(name)) return *s;
    sections.emplace_back(name, std::vector<std::pair<std::string, std::string>>{});
    return sections.back().second;
  }
};

inline KeyValueDoc parse_key_values(const std::vector<std::string>& lines, std::size_t first = 0,
                                    std::size_t last = std::string::npos) {
  KeyValueDoc doc;
  std::string current;
  last = std::min(last, lines.size());
  for (std::size_t i = first; i < last; ++i) {
    const std::string line = trim(lines[i]);
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw FormatError("bad section header: " + line);
      current = trim(std::string_view(line).substr(1, line.size() - 2));
      doc.section(current);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw FormatError("expected 'key = value': " + line);
    doc.section(current).emplace_back(trim(std::string_view(line).substr(0, eq)),
                                      trim(std::string_view(line).substr(eq + 1)));
  }
  return doc;
}

inline void write_section(std::ostringstream& os, const std::string& name,
                          const std::vector<std::pair<std::string, std::string>>& kv) {
  if (!name.empty()) os << '[' << name << "]\n";
  for (const auto& [k, v] : kv) os << k << " = " << v << '\n';
}

// ---------------------------------------------------------------------------
// planner config

inline std::vector<std::pair<std::string, std::string>> config_entries(const PlannerConfig& c) {
  auto e = [](double x) { return format_exact(x); };
  return {
      {"rho", e(c.rho)},
      {"tau", e(c.tau)},
      {"u_max", e(c.u_max)},
      {"du", e(c.du)},
      {"v_max", exact3(c.v_max)},
      {"a_max", exact3(c.a_max)},
      {"j_max", exact3(c.j_max)},
      {"yaw", e(c.yaw)},
      {"g", e(c.g)},
      {"axes", c.axes == PlanAxes::k2D ? "2d" : "3d"},
      {"order", std::to_string(c.order)},
      {"samples", std::to_string(c.samples)},
      {"quantum.p", e(c.quantum.dp)},
      {"quantum.v", e(c.quantum.dv)},
      {"quantum.a", e(c.quantum.da)},
      {"goal_tol.p", e(c.goal_tol.p)},
      {"goal_tol.v", e(c.goal_tol.v)},
      {"goal_tol.a", e(c.goal_tol.a)},
      {"robot.r", e(c.robot.r)},
      {"robot.h", e(c.robot.h)},
      {"workspace.lo", exact3(c.workspace.lo)},
      {"workspace.hi", exact3(c.workspace.hi)},
      {"max_expansions", std::to_string(c.max_expansions)},
      {"heuristic_weight", e(c.heuristic_weight)},
      {"t_cap", e(c.t_cap)},
  };
}

inline PlanAxes parse_axes(const std::string& s) {
  if (s == "2d" || s == "2D" || s == "2") return PlanAxes::k2D;
  if (s == "3d" || s == "3D" || s == "3") return PlanAxes::k3D;
  throw ConfigError("axes must be 2d or 3d, got '" + s + "'");
}

inline long parse_integer(const std::string& key, const std::string& value) {
  long x = 0;
  const auto res = std::from_chars(value.data(), value.data() + value.size(), x);
  if (res.ec != std::errc() || res.ptr != value.data() + value.size())
    throw ConfigError(key + ": not an integer: '" + value + "'");
  return x;
}

/// Applies one setting; unknown keys and malformed values raise ConfigError.
inline void apply_config_entry(PlannerConfig& c, const std::string& key, const std::string& value) {
  try {
    if (key == "rho") c.rho = parse_double(value);
    else if (key == "tau") c.tau = parse_double(value);
    else if (key == "u_max") c.u_max = parse_double(value);
    else if (key == "du") c.du = parse_double(value);
    else if (key == "v_max") c.v_max = parse_vec3(value);
    else if (key == "a_max") c.a_max = parse_vec3(value);
    else if (key == "j_max") c.j_max = parse_vec3(value);
    else if (key == "yaw") c.yaw = parse_double(value);
    else if (key == "g") c.g = parse_double(value);
    else if (key == "axes") c.axes = parse_axes(value);
    else if (key == "order") c.order = static_cast<int>(parse_integer(key, value));
    else if (key == "samples") c.samples = static_cast<int>(parse_integer(key, value));
    else if (key == "quantum.p") c.quantum.dp = parse_double(value);
    else if (key == "quantum.v") c.quantum.dv = parse_double(value);
    else if (key == "quantum.a") c.quantum.da = parse_double(value);
    else if (key == "goal_tol.p") c.goal_tol.p = parse_double(value);
    else if (key == "goal_tol.v") c.goal_tol.v = parse_double(value);
    else if (key == "goal_tol.a") c.goal_tol.a = parse_double(value);
    else if (key == "robot.r") c.robot.r = parse_double(value);
    else if (key == "robot.h") c.robot.h = parse_double(value);
    else if (key == "workspace.lo") c.workspace.lo = parse_vec3(value);
    else if (key == "workspace.hi") c.workspace.hi = parse_vec3(value);
    else if (key == "max_expansions") {
      const long n = parse_integer(key, value);
      if (n <= 0) throw ConfigError("max_expansions must be positive");
      c.max_expansions = static_cast<std::size_t>(n);
    } else if (key == "heuristic_weight") c.heuristic_weight = parse_double(value);
    else if (key == "t_cap") c.t_cap = parse_double(value);
    else throw ConfigError("unknown config key '" + key + "'");
  } catch (const FormatError& e) {
    throw ConfigError(key + ": " + e.what());
  }
}

inline PlannerConfig config_from_entries(const std::vector<std::pair<std::string, std::string>>& kv,
                                         PlannerConfig base = {}) {
  for (const auto& [k, v] : kv) apply_config_entry(base, k, v);
  return base;
}

inline std::string write_config(const PlannerConfig& c) {
  std::ostringstream os;
  write_section(os, "", config_entries(c));
  return os.str();
}

/// Parses a flat config file over `base`; the result is validated.
inline PlannerConfig parse_config(const std::string& text, PlannerConfig base = {}) {
  const KeyValueDoc doc = parse_key_values(lines_of(text));
  for (const auto& [name, kv] : doc.sections) {
    if (!name.empty()) throw ConfigError("config files have no sections, found [" + name + "]");
    base = config_from_entries(kv, base);
  }
  base.validate();
  return base;
}

// ---------------------------------------------------------------------------
// pcmap v1

inline std::string write_pcmap(const PointCloudMap& map) {
  std::ostringstream os;
  os << "pcmap v1 " << map.size() << '\n';
  for (const auto& p : map.points()) os << exact3(p) << '\n';
  return os.str();
}

inline PointCloudMap parse_pcmap(const std::string& text) {
  const auto lines = lines_of(text);
  if (lines.empty()) throw FormatError("pcmap: empty file");
  const auto header = split_fields(lines[0], false);
  if (header.size() != 3 || header[0] != "pcmap" || header[1] != "v1")
    throw FormatError("pcmap: expected header 'pcmap v1 <count>'");
  long count = 0;
  try {
    count = parse_integer("count", header[2]);
  } catch (const ConfigError&) {
    throw FormatError("pcmap: bad point count '" + header[2] + "'");
  }
  if (count < 0) throw FormatError("pcmap: negative point count");
  std::vector<Vec3> pts;
  pts.reserve(static_cast<std::size_t>(count));
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = split_fields(lines[i], false);
    if (f.empty()) continue;
    if (f.size() != 3) throw FormatError("pcmap: line " + std::to_string(i + 1) + " needs x y z");
    const Vec3 p(parse_double(f[0]), parse_double(f[1]), parse_double(f[2]));
    if (!p.allFinite())
      throw FormatError("pcmap: non-finite point on line " + std::to_string(i + 1));
    pts.push_back(p);
  }
  if (static_cast<long>(pts.size()) != count)
    throw FormatError("pcmap: header says " + std::to_string(count) + " points, found " +
                      std::to_string(pts.size()));
  return PointCloudMap(std::move(pts));
}

inline PointCloudMap load_pcmap(const std::filesystem::path& path) {
  return parse_pcmap(read_file(path));
}

// ---------------------------------------------------------------------------
// traj v1
//
//   traj v1
//   order <k>
//   rho <rho>
//   start <p> <v> <a>
//   segments <n>
//   segment <i>
//   tau <tau>
//   s0 <p> <v> <a>
//   u <ux> <uy> <uz>
//   coef x <d_0> ... <d_k>
//   coef y ...
//   coef z ...
//
// Coefficients are the Taylor coefficients of x(t) = sum d_k t^k / k! in the
// segment's local time; they are derived data and must match s0 and u.

inline std::string state_fields(const FlatState& s) {
  return exact3(s.p) + ' ' + exact3(s.v) + ' ' + exact3(s.a);
}

inline std::string write_traj(const Trajectory& traj) {
  std::ostringstream os;
  os << "traj v1\n";
  os << "order " << traj.order() << '\n';
  os << "rho " << format_exact(traj.rho()) << '\n';
  os << "start " << state_fields(traj.knot(0)) << '\n';
  os << "segments " << traj.size() << '\n';
  const char* names = "xyz";
  for (std::size_t n = 0; n < traj.size(); ++n) {
    const MotionPrimitive& seg = traj.segments()[n];
    os << "segment " << n << '\n';
    os << "tau " << format_exact(seg.tau) << '\n';
    os << "s0 " << state_fields(seg.s0) << '\n';
    os << "u " << exact3(seg.u) << '\n';
    for (int axis = 0; axis < 3; ++axis) {
      os << "coef " << names[axis];
      for (double d : seg.coefficients(axis)) os << ' ' << format_exact(d);
      os << '\n';
    }
  }
  return os.str();
}

namespace detail {

class LineReader {
 public:
  explicit LineReader(std::vector<std::string> lines) : lines_(std::move(lines)) {}

  // Next non-empty line split into fields; its first field must be `tag`.
  std::vector<std::string> expect(const std::string& tag) {
    while (pos_ < lines_.size() && trim(lines_[pos_]).empty()) ++pos_;
    if (pos_ >= lines_.size()) throw FormatError("traj: missing '" + tag + "' line");
    auto f = split_fields(lines_[pos_], false);
    if (f.empty() || f[0] != tag)
      throw FormatError("traj: line " + std::to_string(pos_ + 1) + ": expected '" + tag + "'");
    ++pos_;
    return f;
  }

  bool at_end() {
    while (pos_ < lines_.size() && trim(lines_[pos_]).empty()) ++pos_;
    return pos_ >= lines_.size();
  }

 private:
  std::vector<std::string> lines_;
  std::size_t pos_ = 0;
};

inline std::vector<double> numbers_after(const std::vector<std::string>& f, std::size_t skip,
                                         std::size_t count) {
  if (f.size() != skip + count)
    throw FormatError("traj: '" + f[0] + "' needs " + std::to_string(count) + " values");
  std::vector<double> out;
  for (std::size_t i = skip; i < f.size(); ++i) out.push_back(parse_double(f[i]));
  for (double x : out)
    if (!std::isfinite(x)) throw FormatError("traj: non-finite value in '" + f[0] + "'");
  return out;
}

inline FlatState state_from(const std::vector<double>& x) {
  return FlatState(Vec3(x[0], x[1], x[2]), Vec3(x[3], x[4], x[5]), Vec3(x[6], x[7], x[8]));
}

}  // namespace detail

/// Parses a traj v1 file. Structural problems and coefficient lines that do
/// not match the segment data raise FormatError; knot continuity is left to
/// revalidate().
inline Trajectory parse_traj(const std::string& text) {
  detail::LineReader in(lines_of(text));
  const auto magic = in.expect("traj");
  if (magic.size() != 2 || magic[1] != "v1") throw FormatError("traj: expected 'traj v1'");
  const auto order_f = in.expect("order");
  if (order_f.size() != 2) throw FormatError("traj: bad order line");
  const int order = order_f[1] == "1" ? 1 : order_f[1] == "2" ? 2 : order_f[1] == "3" ? 3 : 0;
  if (order == 0) throw FormatError("traj: order must be 1, 2 or 3");
  const double rho = detail::numbers_after(in.expect("rho"), 1, 1)[0];
  const FlatState start = detail::state_from(detail::numbers_after(in.expect("start"), 1, 9));
  const auto count_f = in.expect("segments");
  long count = -1;
  if (count_f.size() == 2) {
    const auto res = std::from_chars(count_f[1].data(), count_f[1].data() + count_f[1].size(), count);
    if (res.ec != std::errc() || res.ptr != count_f[1].data() + count_f[1].size()) count = -1;
  }
  if (count < 0) throw FormatError("traj: bad segment count");

  std::vector<MotionPrimitive> segs;
  const char* names = "xyz";
  for (long n = 0; n < count; ++n) {
    const auto seg_f = in.expect("segment");
    if (seg_f.size() != 2 || seg_f[1] != std::to_string(n))
      throw FormatError("traj: expected 'segment " + std::to_string(n) + "'");
    const double tau = detail::numbers_after(in.expect("tau"), 1, 1)[0];
    if (!(tau > 0.0)) throw FormatError("traj: segment " + std::to_string(n) + " has tau <= 0");
    const FlatState s0 = detail::state_from(detail::numbers_after(in.expect("s0"), 1, 9));
    const auto u = detail::numbers_after(in.expect("u"), 1, 3);
    MotionPrimitive seg(s0, Vec3(u[0], u[1], u[2]), tau, rho, order);
    for (int axis = 0; axis < 3; ++axis) {
      const auto f = in.expect("coef");
      if (f.size() < 2 || f[1] != std::string(1, names[axis]))
        throw FormatError("traj: expected 'coef " + std::string(1, names[axis]) + "'");
      const auto d = detail::numbers_after(f, 2, static_cast<std::size_t>(order) + 1);
      if (d != seg.coefficients(axis))
        throw FormatError("traj: segment " + std::to_string(n) + " coefficients disagree with s0/u");
    }
    segs.push_back(seg);
  }
  if (!in.at_end()) throw FormatError("traj: trailing content after the last segment");
  if (!segs.empty() && !(segs.front().s0 == start.truncated(order)))
    throw FormatError("traj: first segment does not start at the start state");
  Trajectory traj(std::move(segs), order, rho);
  traj.set_start(start.truncated(order));
  return traj;
}

inline Trajectory load_traj(const std::filesystem::path& path) { return parse_traj(read_file(path)); }

// ---------------------------------------------------------------------------
// scenario v1

inline std::vector<std::pair<std::string, std::string>> scenario_entries(const ScenarioSpec& s) {
  auto e = [](double x) { return format_exact(x); };
  return {
      {"kind", scenario_kind_name(s.kind)},
      {"gap_width", e(s.gap_width)},
      {"window_w", e(s.window_w)},
      {"window_h", e(s.window_h)},
      {"tilt_deg", e(s.tilt_deg)},
      {"spacing", e(s.spacing)},
      {"half_extent", exact3(s.half_extent)},
      {"corridor_width", e(s.corridor_width)},
      {"obstacles", std::to_string(s.obstacles)},
      {"pillar_radius", e(s.pillar_radius)},
      {"seed", std::to_string(s.seed)},
      {"axes", s.axes == PlanAxes::k2D ? "2d" : "3d"},
      {"robot.r", e(s.robot.r)},
      {"robot.h", e(s.robot.h)},
  };
}

inline void apply_scenario_entry(ScenarioSpec& s, const std::string& key, const std::string& value) {
  try {
    if (key == "kind") s.kind = parse_scenario_kind(value);
    else if (key == "gap_width") s.gap_width = parse_double(value);
    else if (key == "window_w") s.window_w = parse_double(value);
    else if (key == "window_h") s.window_h = parse_double(value);
    else if (key == "tilt_deg") s.tilt_deg = parse_double(value);
    else if (key == "spacing") s.spacing = parse_double(value);
    else if (key == "half_extent") s.half_extent = parse_vec3(value);
    else if (key == "corridor_width") s.corridor_width = parse_double(value);
    else if (key == "obstacles") s.obstacles = static_cast<int>(parse_integer(key, value));
    else if (key == "pillar_radius") s.pillar_radius = parse_double(value);
    else if (key == "seed") {
      std::uint64_t seed = 0;
      const auto res = std::from_chars(value.data(), value.data() + value.size(), seed);
      if (res.ec != std::errc() || res.ptr != value.data() + value.size())
        throw SpecInvalid("seed: not an unsigned integer");
      s.seed = seed;
    } else if (key == "axes") s.axes = parse_axes(value);
    else if (key == "robot.r") s.robot.r = parse_double(value);
    else if (key == "robot.h") s.robot.h = parse_double(value);
    else throw SpecInvalid("unknown scenario key '" + key + "'");
  } catch (const FormatError& e) {
    throw SpecInvalid(key + ": " + e.what());
  } catch (const ConfigError& e) {
    throw SpecInvalid(key + ": " + e.what());
  }
}

/// Start and goal of a planning query.
struct Endpoints {
  FlatState start;
  PartialGoal goal;
};

inline std::vector<std::pair<std::string, std::string>> endpoint_entries(const Endpoints& q) {
  std::vector<std::pair<std::string, std::string>> kv = {
      {"start.p", exact3(q.start.p)},
      {"start.v", exact3(q.start.v)},
      {"start.a", exact3(q.start.a)},
      {"goal.p", exact3(q.goal.p)},
  };
  if (q.goal.v) kv.emplace_back("goal.v", exact3(*q.goal.v));
  if (q.goal.a) kv.emplace_back("goal.a", exact3(*q.goal.a));
  return kv;
}

inline Endpoints endpoints_from(const std::vector<std::pair<std::string, std::string>>& kv) {
  Endpoints q;
  for (const auto& [k, v] : kv) {
    if (k == "start.p") q.start.p = parse_vec3(v);
    else if (k == "start.v") q.start.v = parse_vec3(v);
    else if (k == "start.a") q.start.a = parse_vec3(v);
    else if (k == "goal.p") q.goal.p = parse_vec3(v);
    else if (k == "goal.v") q.goal.v = parse_vec3(v);
    else if (k == "goal.a") q.goal.a = parse_vec3(v);
    else throw FormatError("unknown endpoint key '" + k + "'");
  }
  return q;
}

/// Scenario descriptor: the spec that regenerates the map, the endpoints and
/// the recommended planner config.
inline std::string write_scenario(const Scenario& sc) {
  std::ostringstream os;
  os << "scenario v1\n";
  write_section(os, "spec", scenario_entries(sc.spec));
  write_section(os, "endpoints", endpoint_entries({sc.start, sc.goal}));
  write_section(os, "config", config_entries(sc.config));
  return os.str();
}

struct ScenarioDescriptor {
  ScenarioSpec spec;
  Endpoints endpoints;
  PlannerConfig config;
};

inline ScenarioDescriptor descriptor_from_doc(const KeyValueDoc& doc) {
  ScenarioDescriptor d;
  const auto* spec = doc.find("spec");
  const auto* ends = doc.find("endpoints");
  const auto* cfg = doc.find("config");
  if (!spec || !ends || !cfg) throw FormatError("scenario: needs [spec], [endpoints] and [config]");
  for (const auto& [k, v] : *spec) apply_scenario_entry(d.spec, k, v);
  d.endpoints = endpoints_from(*ends);
  d.config = config_from_entries(*cfg);
  return d;
}

inline ScenarioDescriptor parse_scenario(const std::string& text) {
  const auto lines = lines_of(text);
  if (lines.empty() || trim(lines[0]) != "scenario v1")
    throw FormatError("scenario: expected 'scenario v1'");
  return descriptor_from_doc(parse_key_values(lines, 1));
}

// ---------------------------------------------------------------------------
// runrec v1

struct TraceRow {
  double t = 0.0;
  FlatState state;
  Vec3 jerk = Vec3::Zero();
  double roll = 0.0;   // rad; NaN where the attitude is undefined
  double pitch = 0.0;  // rad
  double thrust = 0.0;  // |f_d|, m/s^2
};

inline constexpr double kTraceDt = 0.01;

/// Samples the trajectory at t = k dt plus the final instant. Roll and pitch
/// come from the thrust-aligned attitude of the same samples.
inline std::vector<TraceRow> trace(const Trajectory& traj, double yaw = 0.0, double g = kGravity,
                                   double dt = kTraceDt) {
  if (!(dt > 0.0)) throw ConfigError("trace: dt must be positive");
  std::vector<TraceRow> rows;
  const double T = traj.duration();
  const auto steps = static_cast<long>(std::floor(T / dt + 1e-9));
  auto row_at = [&](double t) {
    TraceRow r;
    r.t = t;
    const TrajectorySample s = traj.sample(t);
    r.state = s.state;
    r.jerk = s.jerk;
    const Vec3 f = desired_force(s.state.a, g);
    r.thrust = f.norm();
    try {
      const Mat3 R = desired_rotation(f, yaw);
      r.roll = roll_of(R);
      r.pitch = pitch_of(R);
    } catch (const AttitudeError&) {
      r.roll = r.pitch = std::numeric_limits<double>::quiet_NaN();
    }
    return r;
  };
  for (long k = 0; k <= steps; ++k) rows.push_back(row_at(static_cast<double>(k) * dt));
  if (T - static_cast<double>(steps) * dt > 1e-9) rows.push_back(row_at(T));
  return rows;
}

inline std::vector<std::pair<std::string, std::string>> stats_entries(const PlanStats& s) {
  return {
      {"expanded", std::to_string(s.expanded)},
      {"generated", std::to_string(s.generated)},
      {"wall_ms", format_g9(s.wall_ms)},
      {"J", format_g9(s.J)},
      {"T", format_g9(s.T)},
      {"total_cost", format_g9(s.total_cost)},
      {"heuristic_weight", format_g9(s.heuristic_weight)},
      {"optimal", s.optimal ? "true" : "false"},
  };
}

struct RunRecord {
  PlannerConfig config;
  std::optional<ScenarioSpec> scenario;  // absent when the map came from a file
  std::string map_source;                // map path, or "scenario"
  Endpoints endpoints;
  std::vector<std::pair<std::string, PlanStats>> stages;  // "plan", or "prior" and "final"
  std::string status = "ok";                              // ok or the failure name
  std::vector<TraceRow> rows;
};

inline std::string write_runrec(const RunRecord& rec) {
  std::ostringstream os;
  os << "runrec v1\n";
  write_section(os, "config", config_entries(rec.config));
  std::vector<std::pair<std::string, std::string>> sc = {{"map", rec.map_source}};
  if (rec.scenario)
    for (auto& kv : scenario_entries(*rec.scenario)) sc.push_back(kv);
  write_section(os, "scenario", sc);
  write_section(os, "endpoints", endpoint_entries(rec.endpoints));
  write_section(os, "result", {{"status", rec.status}});
  for (const auto& [name, stats] : rec.stages) write_section(os, "stats." + name, stats_entries(stats));
  os << "[trace]\n";
  os << "# t px py pz vx vy vz ax ay az jx jy jz roll pitch thrust\n";
  for (const auto& r : rec.rows) {
    os << format_g9(r.t) << ' ' << g9_3(r.state.p) << ' ' << g9_3(r.state.v) << ' '
       << g9_3(r.state.a) << ' ' << g9_3(r.jerk) << ' ' << format_g9(r.roll) << ' '
       << format_g9(r.pitch) << ' ' << format_g9(r.thrust) << '\n';
  }
  return os.str();
}

/// Reads the config, scenario, endpoints and stats back (the trace is
/// skipped), enough to re-run the recorded query.
inline RunRecord parse_runrec(const std::string& text) {
  const auto lines = lines_of(text);
  if (lines.empty() || trim(lines[0]) != "runrec v1") throw FormatError("runrec: expected 'runrec v1'");
  std::size_t trace_at = lines.size();
  for (std::size_t i = 1; i < lines.size(); ++i)
    if (trim(lines[i]) == "[trace]") trace_at = i;
  const KeyValueDoc doc = parse_key_values(lines, 1, trace_at);
  RunRecord rec;
  if (const auto* c = doc.find("config")) rec.config = config_from_entries(*c);
  else throw FormatError("runrec: missing [config]");
  if (const auto* s = doc.find("scenario")) {
    ScenarioSpec spec;
    bool has_spec = false;
    for (const auto& [k, v] : *s) {
      if (k == "map") {
        rec.map_source = v;
      } else {
        apply_scenario_entry(spec, k, v);
        has_spec = true;
      }
    }
    if (has_spec) rec.scenario = spec;
  }
  if (const auto* e = doc.find("endpoints")) rec.endpoints = endpoints_from(*e);
  if (const auto* r = doc.find("result")) {
    for (const auto& [k, v] : *r)
      if (k == "status") rec.status = v;
  }
  for (const auto& [name, kv] : doc.sections) {
    if (name.rfind("stats.", 0) != 0) continue;
    PlanStats st;
    for (const auto& [k, v] : kv) {
      if (k == "expanded") st.expanded = static_cast<std::size_t>(parse_integer(k, v));
      else if (k == "generated") st.generated = static_cast<std::size_t>(parse_integer(k, v));
      else if (k == "wall_ms") st.wall_ms = parse_double(v);
      else if (k == "J") st.J = parse_double(v);
      else if (k == "T") st.T = parse_double(v);
      else if (k == "total_cost") st.total_cost = parse_double(v);
      else if (k == "heuristic_weight") st.heuristic_weight = parse_double(v);
      else if (k == "optimal") st.optimal = v == "true";
    }
    rec.stages.emplace_back(name.substr(6), st);
  }
  return rec;
}

// ---------------------------------------------------------------------------
// sweep report

struct SweepRow {
  std::string scenario;
  double rho = 0.0;
  double tau = 0.0;
  double du = 0.0;
  std::string status;  // ok or the failure name
  PlanStats stats;
};

inline std::string write_sweep_report(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "# sweep v1\n";
  os << "scenario\trho\ttau\tdu\tstatus\texpanded\tgenerated\tJ\tT\ttotal_cost\twall_ms\n";
  for (const auto& r : rows) {
    os << r.scenario << '\t' << format_g9(r.rho) << '\t' << format_g9(r.tau) << '\t'
       << format_g9(r.du) << '\t' << r.status << '\t' << r.stats.expanded << '\t'
       << r.stats.generated << '\t' << format_g9(r.stats.J) << '\t' << format_g9(r.stats.T)
       << '\t' << format_g9(r.stats.total_cost) << '\t' << format_g9(r.stats.wall_ms) << '\n';
  }
  return os.str();
}

}  // namespace kinoplan

#endif  // KINOPLAN_IO_HPP
