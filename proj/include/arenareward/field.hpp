#pragma once

// Reward fields over the arena floor plane: sample a component (or a whole
// spec's potential) with a probe car placed at every grid point, look up the
// nearest grid point to arbitrary positions, and export the result.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <future>
#include <iomanip>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "arenareward/arena.hpp"
#include "arenareward/composition.hpp"
#include "arenareward/error.hpp"

namespace arenareward {

/// Static 3-d tree over a point set. Nearest queries break distance ties
/// toward the lowest point index.
class KdTree {
 public:
  KdTree() = default;
  explicit KdTree(std::vector<Vec3> points) : points_(std::move(points)) {
    order_.resize(points_.size());
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    build(0, order_.size(), 0);
  }

  std::size_t size() const { return points_.size(); }

  std::size_t nearest(const Vec3& q) const {
    if (points_.empty()) throw ParameterError("nearest lookup on an empty point set");
    Best best;
    search(0, order_.size(), 0, q, best);
    return best.index;
  }

 private:
  struct Best {
    double dist2 = std::numeric_limits<double>::infinity();
    std::size_t index = std::numeric_limits<std::size_t>::max();
  };

  static double axis_value(const Vec3& v, int axis) { return axis == 0 ? v.x : axis == 1 ? v.y : v.z; }

  void build(std::size_t lo, std::size_t hi, int axis) {
    if (hi - lo <= 1) return;
    const std::size_t mid = lo + (hi - lo) / 2;
    std::nth_element(order_.begin() + static_cast<std::ptrdiff_t>(lo), order_.begin() + static_cast<std::ptrdiff_t>(mid),
                     order_.begin() + static_cast<std::ptrdiff_t>(hi), [&](std::size_t a, std::size_t b) {
                       const double va = axis_value(points_[a], axis);
                       const double vb = axis_value(points_[b], axis);
                       return va < vb || (va == vb && a < b);
                     });
    build(lo, mid, (axis + 1) % 3);
    build(mid + 1, hi, (axis + 1) % 3);
  }

  void search(std::size_t lo, std::size_t hi, int axis, const Vec3& q, Best& best) const {
    if (lo >= hi) return;
    const std::size_t mid = lo + (hi - lo) / 2;
    const std::size_t idx = order_[mid];
    const double d2 = (points_[idx] - q).squared_norm();
    if (d2 < best.dist2 || (d2 == best.dist2 && idx < best.index)) best = {d2, idx};
    const double delta = axis_value(q, axis) - axis_value(points_[idx], axis);
    const int next = (axis + 1) % 3;
    const bool left_first = delta <= 0.0;
    if (left_first) search(lo, mid, next, q, best);
    else search(mid + 1, hi, next, q, best);
    // <= keeps equal-distance candidates on the far side reachable for the tie rule.
    if (delta * delta <= best.dist2) {
      if (left_first) search(mid + 1, hi, next, q, best);
      else search(lo, mid, next, q, best);
    }
  }

  std::vector<Vec3> points_;
  std::vector<std::size_t> order_;
};

struct GridConfig {
  std::size_t nx = 128;
  std::size_t ny = 160;
  double z = 300.0;
  unsigned threads = 0;  // 0: hardware concurrency
};

/// Rectilinear grid spanning the field floor; point (i, j) sits at index
/// j * nx + i with x increasing along i and y along j.
struct ArenaGrid {
  std::size_t nx = 0;
  std::size_t ny = 0;
  double z = 0.0;
  std::vector<Vec3> positions;
  std::vector<double> values;

  bool operator==(const ArenaGrid& o) const {
    return nx == o.nx && ny == o.ny && z == o.z && positions == o.positions && values == o.values;
  }
};

inline ArenaGrid make_grid(const GridConfig& cfg, const ArenaConstants& arena = default_arena()) {
  if (cfg.nx < 2 || cfg.ny < 2) throw ParameterError("grid resolution must be at least 2x2");
  ArenaGrid g{cfg.nx, cfg.ny, cfg.z, {}, {}};
  g.positions.reserve(cfg.nx * cfg.ny);
  for (std::size_t j = 0; j < cfg.ny; ++j) {
    const double y = -arena.half_length_y + 2.0 * arena.half_length_y * static_cast<double>(j) /
                                                static_cast<double>(cfg.ny - 1);
    for (std::size_t i = 0; i < cfg.nx; ++i) {
      const double x = -arena.half_width_x + 2.0 * arena.half_width_x * static_cast<double>(i) /
                                                 static_cast<double>(cfg.nx - 1);
      g.positions.push_back({x, y, cfg.z});
    }
  }
  g.values.assign(g.positions.size(), 0.0);
  return g;
}

/// Ball plus the other cars on the field. The probe car is inserted as Blue
/// slot 0 and moved to every grid point; its velocity, orientation and boost
/// come from `probe`.
struct FieldScenario {
  PhysObject ball;
  std::vector<PlayerState> players;
  PlayerState probe;

  bool operator==(const FieldScenario&) const = default;

  GameState state_with_probe(const Vec3& at) const {
    GameState s;
    s.ball = ball;
    s.players.reserve(players.size() + 1);
    PlayerState p = probe;
    p.team = Team::Blue;
    p.body.position = at;
    s.players.push_back(p);
    for (const auto& other : players)
      if (other.team == Team::Blue) s.players.push_back(other);
    for (const auto& other : players)
      if (other.team == Team::Orange) s.players.push_back(other);
    return s;
  }
};

namespace detail {

template <class Fn>
void parallel_fill(std::vector<double>& out, unsigned threads, Fn fn) {
  const std::size_t n = out.size();
  unsigned workers = threads != 0 ? threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(1, n / 256)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return;
  }
  std::vector<std::future<void>> jobs;
  const std::size_t chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    jobs.push_back(std::async(std::launch::async, [&, lo, hi] {
      for (std::size_t i = lo; i < hi; ++i) out[i] = fn(i);
    }));
  }
  for (auto& j : jobs) j.get();
}

}  // namespace detail

/// Value of `node` for the probe at each grid point.
inline ArenaGrid sample_field(const RewardNode& node, const FieldScenario& scenario, const GridConfig& cfg,
                              const ArenaConstants& arena = default_arena()) {
  ArenaGrid g = make_grid(cfg, arena);
  detail::parallel_fill(g.values, cfg.threads, [&](std::size_t i) {
    const GameState s = scenario.state_with_probe(g.positions[i]);
    return node.evaluate(ComponentContext{s, nullptr, {}, 0, arena});
  });
  return g;
}

enum class FieldQuantity {
  Potential,    // the probe's Φ
  Distributed,  // Φ of every player passed through team-spirit distribution
};

inline ArenaGrid sample_field(const RewardSpec& spec, const FieldScenario& scenario, const GridConfig& cfg,
                              FieldQuantity quantity = FieldQuantity::Potential,
                              const ArenaConstants& arena = default_arena()) {
  if (!spec.potential) throw SpecError("spec '" + spec.name + "' has no potential to sample");
  ArenaGrid g = make_grid(cfg, arena);
  detail::parallel_fill(g.values, cfg.threads, [&](std::size_t i) {
    const GameState s = scenario.state_with_probe(g.positions[i]);
    if (quantity == FieldQuantity::Potential) return player_potential(spec, s, 0, arena);
    std::vector<double> phi(s.players.size());
    std::vector<Team> teams(s.players.size());
    for (std::size_t p = 0; p < s.players.size(); ++p) {
      phi[p] = player_potential(spec, s, p, arena);
      teams[p] = s.players[p].team;
    }
    return distribute_team_spirit(phi, teams, spec.team_spirit)[0];
  });
  return g;
}

/// Nearest-point index over a grid; build once, query many times.
class GridLookup {
 public:
  explicit GridLookup(const ArenaGrid& grid) : grid_(&grid), tree_(grid.positions) {}

  std::pair<std::size_t, double> operator()(const Vec3& position) const {
    const std::size_t i = tree_.nearest(position);
    return {i, grid_->values[i]};
  }

 private:
  const ArenaGrid* grid_;
  KdTree tree_;
};

inline std::pair<std::size_t, double> nearest_grid_lookup(const ArenaGrid& grid, const Vec3& position) {
  if (grid.positions.empty()) throw ParameterError("nearest lookup on an empty grid");
  return GridLookup(grid)(position);
}

// ---------------------------------------------------------------------------
// Reports

struct FieldAnnotation {
  std::string label;  // "ball" or "player<N>"
  Vec3 position;
  std::size_t grid_index = 0;
  double value = 0.0;

  bool operator==(const FieldAnnotation&) const = default;
};

struct FieldReport {
  ArenaGrid grid;
  FieldScenario scenario;
  std::string component;
  ParamMap params;
  std::vector<FieldAnnotation> annotations;

  bool operator==(const FieldReport&) const = default;
};

/// Annotates the ball (optional) and each scenario player, or a single player
/// when `player_index` is set, with the value at its nearest grid point.
inline FieldReport make_report(ArenaGrid grid, FieldScenario scenario, std::string component, ParamMap params,
                               bool annotate_ball = false, bool annotate_players = true,
                               std::optional<std::size_t> player_index = std::nullopt) {
  FieldReport r{std::move(grid), std::move(scenario), std::move(component), std::move(params), {}};
  const GridLookup lookup(r.grid);
  const auto add = [&](std::string label, const Vec3& at) {
    const auto [i, v] = lookup(at);
    r.annotations.push_back({std::move(label), at, i, v});
  };
  if (annotate_ball) add("ball", r.scenario.ball.position);
  if (annotate_players) {
    for (std::size_t i = 0; i < r.scenario.players.size(); ++i)
      if (!player_index || *player_index == i)
        add("player" + std::to_string(i), r.scenario.players[i].body.position);
  }
  return r;
}

enum class FieldFormat { Csv, Json, Svg };

inline FieldFormat field_format_from_string(const std::string& s) {
  if (s == "csv") return FieldFormat::Csv;
  if (s == "json") return FieldFormat::Json;
  if (s == "svg") return FieldFormat::Svg;
  throw ParameterError("unknown field format '" + s + "'");
}

inline std::string export_field_csv(const FieldReport& r) {
  std::ostringstream out;
  out << std::setprecision(17) << "x,y,value\n";
  for (std::size_t i = 0; i < r.grid.positions.size(); ++i)
    out << r.grid.positions[i].x << ',' << r.grid.positions[i].y << ',' << r.grid.values[i] << '\n';
  return out.str();
}

namespace detail {

// Linear two-segment scale: low -> dark blue, mid -> white, high -> dark red.
inline std::string heat_color(double t) {
  t = std::clamp(t, 0.0, 1.0);
  const auto mix = [](double a, double b, double u) { return static_cast<int>(std::lround(a + (b - a) * u)); };
  int r, g, b;
  if (t < 0.5) {
    const double u = t / 0.5;
    r = mix(33, 247, u);
    g = mix(102, 247, u);
    b = mix(172, 247, u);
  } else {
    const double u = (t - 0.5) / 0.5;
    r = mix(247, 178, u);
    g = mix(247, 24, u);
    b = mix(247, 43, u);
  }
  std::ostringstream s;
  s << '#' << std::hex << std::setfill('0') << std::setw(2) << r << std::setw(2) << g << std::setw(2) << b;
  return s.str();
}

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace detail

inline std::string export_field_svg(const FieldReport& r, int cell = 4) {
  const auto& g = r.grid;
  if (g.values.empty()) throw ParameterError("cannot render an empty grid");
  const auto [lo_it, hi_it] = std::minmax_element(g.values.begin(), g.values.end());
  const double lo = *lo_it;
  const double span = *hi_it - *lo_it;
  const double width = static_cast<double>(g.nx * static_cast<std::size_t>(cell));
  const double height = static_cast<double>(g.ny * static_cast<std::size_t>(cell));
  const double x0 = g.positions.front().x;
  const double y0 = g.positions.front().y;
  const double x1 = g.positions.back().x;
  const double y1 = g.positions.back().y;
  const auto to_px = [&](const Vec3& p) {
    const double u = (p.x - x0) / (x1 - x0) * (width - cell) + cell / 2.0;
    const double v = height - ((p.y - y0) / (y1 - y0) * (height - cell) + cell / 2.0);
    return std::pair{u, v};
  };

  std::ostringstream out;
  out << std::setprecision(6);
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  out << "<title>" << detail::xml_escape(r.component) << "</title>\n";
  out << "<g shape-rendering=\"crispEdges\">\n";
  for (std::size_t j = 0; j < g.ny; ++j) {
    for (std::size_t i = 0; i < g.nx; ++i) {
      const double v = g.values[j * g.nx + i];
      const double t = span > 0.0 ? (v - lo) / span : 0.5;
      out << "<rect x=\"" << i * static_cast<std::size_t>(cell) << "\" y=\""
          << (g.ny - 1 - j) * static_cast<std::size_t>(cell) << "\" width=\"" << cell << "\" height=\"" << cell
          << "\" fill=\"" << detail::heat_color(t) << "\"/>\n";
    }
  }
  out << "</g>\n<g font-family=\"sans-serif\" font-size=\"10\">\n";
  for (const auto& a : r.annotations) {
    const auto [u, v] = to_px(a.position);
    const bool ball = a.label == "ball";
    out << "<circle cx=\"" << u << "\" cy=\"" << v << "\" r=\"" << (ball ? 6 : 5) << "\" fill=\""
        << (ball ? "#ffffff" : "#000000") << "\" stroke=\"#000000\"/>\n";
    out << "<text x=\"" << u + 8 << "\" y=\"" << v << "\">" << detail::xml_escape(a.label) << ": " << a.value
        << "</text>\n";
  }
  out << "</g>\n</svg>\n";
  return out.str();
}

}  // namespace arenareward
