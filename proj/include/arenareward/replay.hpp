#pragma once

// Replay frame CSVs -> GameStates -> reward timelines.
//
// Canonical columns (renamable through ColumnMap):
//   frame, [time], ball_pos_{x,y,z}, ball_vel_{x,y,z}, [ball_angvel_{x,y,z}],
//   playerN_pos_{x,y,z}, playerN_vel_{x,y,z}, playerN_boost, playerN_team,
//   [playerN_angvel_*, playerN_fwd_*, playerN_up_*, playerN_on_ground,
//    playerN_has_flip, playerN_demolished]
// Players are discovered from playerN_pos_x headers, N = 0, 1, ...

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "arenareward/arena.hpp"
#include "arenareward/composition.hpp"
#include "arenareward/error.hpp"
#include "arenareward/events.hpp"

namespace arenareward {

/// Canonical column name -> header name in the file.
struct ColumnMap {
  std::map<std::string, std::string> renames;

  std::string resolve(const std::string& canonical) const {
    const auto it = renames.find(canonical);
    return it == renames.end() ? canonical : it->second;
  }
};

struct ReplayFrame {
  std::int64_t frame = 0;
  double time = 0.0;
  GameState state;
};

struct ReplayFrameTable {
  std::vector<ReplayFrame> frames;
  std::vector<Team> roster;
  std::size_t dropped_rows = 0;
};

struct ReplayOptions {
  double frame_rate = 30.0;  // used for timestamps when there is no time column
  ArenaConstants arena;
  EventRules rules;
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  bool quoted = false;
  for (char c : line) {
    if (c == '"') {
      quoted = !quoted;
    } else if (c == ',' && !quoted) {
      out.push_back(cell);
      cell.clear();
    } else if (c != '\r') {
      cell.push_back(c);
    }
  }
  out.push_back(cell);
  for (auto& s : out) {
    const auto b = s.find_first_not_of(" \t");
    const auto e = s.find_last_not_of(" \t");
    s = b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  }
  return out;
}

inline std::optional<double> parse_number(const std::string& s) {
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) return std::nullopt;
  return v;
}

inline std::optional<double> parse_flag(const std::string& s) {
  if (s == "true" || s == "True") return 1.0;
  if (s == "false" || s == "False") return 0.0;
  return parse_number(s);
}

inline std::optional<Team> parse_team(const std::string& s) {
  if (s == "0" || s == "blue" || s == "Blue") return Team::Blue;
  if (s == "1" || s == "orange" || s == "Orange") return Team::Orange;
  return std::nullopt;
}

struct ColumnIndex {
  std::map<std::string, std::size_t> by_name;
  const ColumnMap* map = nullptr;

  std::size_t required(const std::string& canonical) const {
    const auto it = by_name.find(map->resolve(canonical));
    if (it == by_name.end())
      throw SchemaError("replay CSV: missing column '" + map->resolve(canonical) + "'", map->resolve(canonical));
    return it->second;
  }
  std::optional<std::size_t> optional(const std::string& canonical) const {
    const auto it = by_name.find(map->resolve(canonical));
    if (it == by_name.end()) return std::nullopt;
    return it->second;
  }
};

struct VecColumns {
  std::size_t x, y, z;
};

struct OptVecColumns {
  std::optional<std::size_t> x, y, z;
  bool present() const { return x && y && z; }
};

struct PlayerColumns {
  VecColumns pos, vel;
  OptVecColumns angvel, fwd, up;
  std::size_t boost, team;
  std::optional<std::size_t> on_ground, has_flip, demolished;
};

}  // namespace detail

inline ReplayFrameTable parse_replay_csv(std::istream& in, const ColumnMap& columns = {},
                                         const ReplayOptions& options = {}) {
  std::string line;
  if (!std::getline(in, line) || line.find_first_not_of(" \t\r") == std::string::npos)
    throw EmptyTableError("replay CSV: empty file");
  const auto header = detail::split_csv_line(line);
  detail::ColumnIndex idx;
  idx.map = &columns;
  for (std::size_t i = 0; i < header.size(); ++i) idx.by_name[header[i]] = i;

  const auto vec = [&](const std::string& prefix) {
    return detail::VecColumns{idx.required(prefix + "_x"), idx.required(prefix + "_y"), idx.required(prefix + "_z")};
  };
  const auto opt_vec = [&](const std::string& prefix) {
    return detail::OptVecColumns{idx.optional(prefix + "_x"), idx.optional(prefix + "_y"),
                                 idx.optional(prefix + "_z")};
  };

  const std::size_t frame_col = idx.required("frame");
  const auto time_col = idx.optional("time");
  const auto ball_pos = vec("ball_pos");
  const auto ball_vel = vec("ball_vel");
  const auto ball_ang = opt_vec("ball_angvel");

  std::vector<detail::PlayerColumns> players;
  for (std::size_t n = 0;; ++n) {
    const std::string p = "player" + std::to_string(n);
    if (!idx.optional(p + "_pos_x")) break;
    players.push_back({vec(p + "_pos"), vec(p + "_vel"), opt_vec(p + "_angvel"), opt_vec(p + "_fwd"),
                       opt_vec(p + "_up"), idx.required(p + "_boost"), idx.required(p + "_team"),
                       idx.optional(p + "_on_ground"), idx.optional(p + "_has_flip"),
                       idx.optional(p + "_demolished")});
  }

  ReplayFrameTable table;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = detail::split_csv_line(line);
    bool ok = cells.size() >= header.size();
    const auto num = [&](std::size_t c) {
      auto v = ok ? detail::parse_number(cells[c]) : std::nullopt;
      if (!v) ok = false;
      return v.value_or(0.0);
    };
    const auto flag = [&](std::optional<std::size_t> c, bool fallback) {
      if (!c || !ok) return fallback;
      auto v = detail::parse_flag(cells[*c]);
      if (!v) ok = false;
      return v.value_or(0.0) != 0.0;
    };
    const auto read_vec = [&](const detail::VecColumns& c) { return Vec3{num(c.x), num(c.y), num(c.z)}; };
    const auto read_opt_vec = [&](const detail::OptVecColumns& c, Vec3 fallback) {
      return c.present() ? Vec3{num(*c.x), num(*c.y), num(*c.z)} : fallback;
    };

    ReplayFrame f;
    const double frame_value = num(frame_col);
    f.frame = static_cast<std::int64_t>(frame_value);
    f.time = time_col ? num(*time_col) : frame_value / options.frame_rate;
    f.state.tick = f.frame;
    f.state.ball.position = read_vec(ball_pos);
    f.state.ball.linear_velocity = read_vec(ball_vel);
    f.state.ball.angular_velocity = read_opt_vec(ball_ang, {});
    f.state.ball.forward = {1.0, 0.0, 0.0};
    std::vector<Team> teams;
    for (const auto& pc : players) {
      PlayerState p;
      const auto team = ok ? detail::parse_team(cells[pc.team]) : std::nullopt;
      if (!team) ok = false;
      p.team = team.value_or(Team::Blue);
      teams.push_back(p.team);
      p.body.position = read_vec(pc.pos);
      p.body.linear_velocity = read_vec(pc.vel);
      p.body.angular_velocity = read_opt_vec(pc.angvel, {});
      p.body.forward = read_opt_vec(pc.fwd, {0.0, p.team == Team::Blue ? 1.0 : -1.0, 0.0});
      p.body.up = read_opt_vec(pc.up, {0.0, 0.0, 1.0});
      p.boost = std::clamp(num(pc.boost), 0.0, 100.0);
      p.on_ground = flag(pc.on_ground, true);
      p.has_flip = flag(pc.has_flip, true);
      p.demolished = flag(pc.demolished, false);
      f.state.players.push_back(p);
    }
    if (!ok) {
      ++table.dropped_rows;
      continue;
    }
    if (!table.frames.empty() && f.frame <= table.frames.back().frame)
      throw SchemaError("replay CSV: frame index not increasing at line " + std::to_string(line_no), "frame");
    if (table.frames.empty()) {
      table.roster = teams;
    } else if (teams != table.roster) {
      throw StateError("replay CSV: roster changed at frame " + std::to_string(f.frame));
    }
    // Keep the Blue-first grouping the reward code expects.
    std::stable_partition(f.state.players.begin(), f.state.players.end(),
                          [](const PlayerState& p) { return p.team == Team::Blue; });
    table.frames.push_back(std::move(f));
  }
  if (table.frames.empty()) throw EmptyTableError("replay CSV: no data rows");
  std::stable_partition(table.roster.begin(), table.roster.end(), [](Team t) { return t == Team::Blue; });
  return table;
}

inline ReplayFrameTable parse_replay_csv(const std::filesystem::path& path, const ColumnMap& columns = {},
                                         const ReplayOptions& options = {}) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open replay '" + path.string() + "'");
  return parse_replay_csv(in, columns, options);
}

/// Writes states in the canonical column layout (every optional column
/// included), one row per state, frame = position in the sequence.
inline void write_replay_csv(std::ostream& out, std::span<const GameState> states, double frame_rate = 30.0) {
  if (states.empty()) throw ParameterError("write_replay_csv: no states");
  const std::size_t n = states.front().players.size();
  const auto vec_header = [&](const std::string& prefix) {
    out << ',' << prefix << "_x," << prefix << "_y," << prefix << "_z";
  };
  out << "frame,time";
  vec_header("ball_pos");
  vec_header("ball_vel");
  vec_header("ball_angvel");
  for (std::size_t i = 0; i < n; ++i) {
    const std::string p = "player" + std::to_string(i);
    vec_header(p + "_pos");
    vec_header(p + "_vel");
    vec_header(p + "_angvel");
    vec_header(p + "_fwd");
    vec_header(p + "_up");
    out << ',' << p << "_boost," << p << "_team," << p << "_on_ground," << p << "_has_flip," << p << "_demolished";
  }
  out << '\n';
  const auto old_precision = out.precision(17);
  const auto put = [&](const Vec3& v) { out << ',' << v.x << ',' << v.y << ',' << v.z; };
  for (std::size_t f = 0; f < states.size(); ++f) {
    const GameState& s = states[f];
    if (s.players.size() != n) throw StateError("write_replay_csv: roster changed at frame " + std::to_string(f));
    out << f << ',' << static_cast<double>(f) / frame_rate;
    put(s.ball.position);
    put(s.ball.linear_velocity);
    put(s.ball.angular_velocity);
    for (const auto& p : s.players) {
      put(p.body.position);
      put(p.body.linear_velocity);
      put(p.body.angular_velocity);
      put(p.body.forward);
      put(p.body.up);
      out << ',' << p.boost << ',' << to_string(p.team) << ',' << int(p.on_ground) << ',' << int(p.has_flip) << ','
          << int(p.demolished);
    }
    out << '\n';
  }
  out.precision(old_precision);
}

// ---------------------------------------------------------------------------
// Timelines

struct TimelineEntry {
  std::int64_t frame = 0;
  double time = 0.0;
  std::vector<EventFlags> events;
  ShapedRewardOutput rewards;

  bool operator==(const TimelineEntry&) const = default;
};

struct RewardTimeline {
  std::string spec_name;
  std::size_t n_skip = 9;
  std::vector<Team> roster;
  std::vector<TimelineEntry> entries;

  bool operator==(const RewardTimeline&) const = default;
};

/// Number of frames evaluated for a table of `total` frames.
inline std::size_t evaluated_frame_count(std::size_t total, std::size_t n_skip) {
  return (total + n_skip) / (n_skip + 1);
}

/// Events the replay reader can infer from positions alone: touch and goal.
inline std::vector<EventFlags> infer_replay_events(const GameState& prev, const GameState& now, double dt,
                                                   const ReplayOptions& options) {
  std::vector<EventFlags> flags(now.players.size());
  const auto touched = infer_touches(prev, now, dt, options.arena, options.rules);
  for (std::size_t i = 0; i < flags.size(); ++i) flags[i].touch = touched[i];
  if (const auto scorer = goal_scored(prev, now, options.arena)) apply_goal(flags, now, *scorer);
  return flags;
}

/// Evaluates every (n_skip + 1)-th frame. The previously evaluated frame acts
/// as the previous state for shaping, touch acceleration and event inference.
inline RewardTimeline replay_to_rewards(const ReplayFrameTable& table, const RewardSpec& spec, std::size_t n_skip = 9,
                                        const ReplayOptions& options = {}) {
  RewardTimeline tl;
  tl.spec_name = spec.name;
  tl.n_skip = n_skip;
  tl.roster = table.roster;
  const ReplayFrame* prev = nullptr;
  for (std::size_t i = 0; i < table.frames.size(); i += n_skip + 1) {
    const ReplayFrame& f = table.frames[i];
    TimelineEntry e;
    e.frame = f.frame;
    e.time = f.time;
    if (prev) {
      check_same_roster(prev->state, f.state);
      e.events = infer_replay_events(prev->state, f.state, f.time - prev->time, options);
    } else {
      e.events.assign(f.state.players.size(), EventFlags{});
    }
    try {
      e.rewards = step_rewards(spec, prev ? &prev->state : nullptr, f.state, e.events, options.arena);
    } catch (const StateError& err) {
      throw StateError(std::string(err.what()) + " (frame " + std::to_string(f.frame) + ")");
    }
    tl.entries.push_back(std::move(e));
    prev = &f;
  }
  return tl;
}

/// Every *.csv directly inside `dir`, parsed and evaluated concurrently.
/// Keys are file names.
inline std::map<std::string, RewardTimeline> replay_directory(const std::filesystem::path& dir,
                                                              const RewardSpec& spec, std::size_t n_skip = 9,
                                                              const ColumnMap& columns = {},
                                                              const ReplayOptions& options = {}) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  std::vector<std::future<RewardTimeline>> jobs;
  for (const auto& f : files)
    jobs.push_back(std::async(std::launch::async, [&, f] {
      return replay_to_rewards(parse_replay_csv(f, columns, options), spec, n_skip, options);
    }));
  std::map<std::string, RewardTimeline> out;
  for (std::size_t i = 0; i < files.size(); ++i) out.emplace(files[i].filename().string(), jobs[i].get());
  return out;
}

}  // namespace arenareward
