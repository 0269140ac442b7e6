// arenareward: command-line front end over the header library.
//
// Exit codes: 0 ok, 1 usage error, 2 data / schema / spec error.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "arenareward/arenareward.hpp"

namespace ar = arenareward;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string spec_path;
  std::string config_path;
  std::string out = "-";
  std::string format;
  int verbosity = 0;
};

ar::RewardSpec resolve_spec(const std::string& flag) {
  std::string path = flag;
  if (path.empty())
    if (const char* env = std::getenv("ARENAREWARD_SPEC"); env && *env) path = env;
  if (path.empty() || path == "lucy_skg") return ar::lucy_skg_spec();
  if (path == "aux_ablation") return ar::aux_ablation_spec();
  return ar::load_spec(path);
}

ar::ArenaConstants resolve_arena(const std::string& path) {
  return path.empty() ? ar::ArenaConstants{} : ar::load_arena(path);
}

std::string extension_format(const std::string& out, const std::string& flag, const std::string& fallback) {
  if (!flag.empty()) return flag;
  if (out != "-") {
    const std::string ext = fs::path(out).extension().string();
    if (ext.size() > 1) return ext.substr(1);
  }
  return fallback;
}

void require_format(const std::string& format, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed)
    if (format == a) return;
  std::string list;
  for (const char* a : allowed) list += std::string(list.empty() ? "" : ", ") + a;
  throw UsageError("format '" + format + "' is not supported here (expected " + list + ")");
}

void write_output(const std::string& out, const std::string& text) {
  if (out == "-" || out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw ar::Error("cannot write '" + out + "'");
  f << text;
}

std::vector<double> parse_numbers(const std::string& s, char sep = ',') {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    const auto v = ar::detail::parse_number(item);
    if (!v) throw UsageError("not a number: '" + item + "'");
    out.push_back(*v);
  }
  return out;
}

ar::Vec3 parse_vec(const std::string& s) {
  const auto v = parse_numbers(s);
  if (v.size() != 3) throw UsageError("expected x,y,z but got '" + s + "'");
  return {v[0], v[1], v[2]};
}

ar::ParamMap parse_params(const std::vector<std::string>& items) {
  ar::ParamMap out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("parameter must be key=value: '" + item + "'");
    const auto v = ar::detail::parse_number(item.substr(eq + 1));
    if (!v) throw UsageError("parameter value is not a number: '" + item + "'");
    out[item.substr(0, eq)] = *v;
  }
  return out;
}

// "blue:x,y,z" or "orange:x,y,z"
ar::PlayerState parse_player(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw UsageError("player must be team:x,y,z: '" + s + "'");
  ar::PlayerState p;
  const auto team = ar::detail::parse_team(s.substr(0, colon));
  if (!team) throw UsageError("unknown team in '" + s + "'");
  p.team = *team;
  p.body.position = parse_vec(s.substr(colon + 1));
  return p;
}

ar::Rosters parse_rosters(const std::string& s) {
  const auto v = s.find('v');
  if (v == std::string::npos) throw UsageError("players must look like 2v2: '" + s + "'");
  const auto blue = ar::detail::parse_number(s.substr(0, v));
  const auto orange = ar::detail::parse_number(s.substr(v + 1));
  if (!blue || !orange || *blue < 0 || *orange < 0) throw UsageError("bad roster '" + s + "'");
  return {static_cast<std::size_t>(*blue), static_cast<std::size_t>(*orange)};
}

// ---------------------------------------------------------------------------

struct FieldArgs {
  std::string component = "offensive_potential";
  std::vector<std::string> params;
  std::string ball = "0,0,93";
  std::vector<std::string> players;
  std::string probe_velocity = "0,0,0";
  double probe_boost = 0.0;
  double z = 300.0;
  std::string res = "128x160";
  unsigned threads = 0;
  bool annotate_ball = false;
};

int run_field(const Common& c, const FieldArgs& a) {
  const std::string format = extension_format(c.out, c.format, "csv");
  require_format(format, {"csv", "json", "svg"});
  const auto dims = parse_numbers(a.res, 'x');
  if (dims.size() != 2 || dims[0] < 2 || dims[1] < 2) throw UsageError("resolution must be NXxNY, each >= 2");

  const ar::ArenaConstants arena = resolve_arena(c.config_path);
  ar::FieldScenario scenario;
  scenario.ball.position = parse_vec(a.ball);
  for (const auto& p : a.players) scenario.players.push_back(parse_player(p));
  scenario.probe.body.linear_velocity = parse_vec(a.probe_velocity);
  scenario.probe.boost = a.probe_boost;
  const ar::ParamMap params = parse_params(a.params);

  ar::GridConfig grid;
  grid.nx = static_cast<std::size_t>(dims[0]);
  grid.ny = static_cast<std::size_t>(dims[1]);
  grid.z = a.z;
  grid.threads = a.threads;

  ar::ArenaGrid values;
  if (a.component == "potential" || a.component == "distributed") {
    if (!params.empty()) throw UsageError("--param does not apply to spec fields");
    const auto quantity = a.component == "potential" ? ar::FieldQuantity::Potential : ar::FieldQuantity::Distributed;
    values = ar::sample_field(resolve_spec(c.spec_path), scenario, grid, quantity, arena);
  } else {
    values = ar::sample_field(ar::make_named_node(a.component, params), scenario, grid, arena);
  }
  if (c.verbosity > 0) std::cerr << "field: " << values.values.size() << " points\n";
  const auto report = ar::make_report(std::move(values), scenario, a.component, params, a.annotate_ball);
  write_output(c.out, ar::export_field(report, ar::field_format_from_string(format)));
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct ReplayArgs {
  std::string in;
  std::size_t n_skip = 9;
  double frame_rate = 30.0;
  std::vector<std::string> columns;
};

int run_replay(const Common& c, const ReplayArgs& a) {
  const std::string format = extension_format(c.out, c.format, "json");
  require_format(format, {"csv", "json"});
  const ar::RewardSpec spec = resolve_spec(c.spec_path);
  ar::ReplayOptions options;
  options.arena = resolve_arena(c.config_path);
  options.frame_rate = a.frame_rate;
  ar::ColumnMap columns;
  for (const auto& item : a.columns) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("column rename must be canonical=header: '" + item + "'");
    columns.renames[item.substr(0, eq)] = item.substr(eq + 1);
  }
  if (!fs::exists(a.in)) throw ar::Error("input '" + a.in + "' does not exist");

  if (fs::is_directory(a.in)) {
    if (format != "json") throw UsageError("directory input only supports JSON output");
    const auto all = ar::replay_directory(a.in, spec, a.n_skip, columns, options);
    ar::Json out = ar::Json::object();
    for (const auto& [name, tl] : all) out[name] = ar::to_json(tl);
    write_output(c.out, out.dump(2) + "\n");
    return kExitOk;
  }

  const auto table = ar::parse_replay_csv(fs::path(a.in), columns, options);
  if (table.dropped_rows > 0 || c.verbosity > 0)
    std::cerr << "replay: " << table.frames.size() << " frames, " << table.dropped_rows << " rows dropped\n";
  const auto tl = ar::replay_to_rewards(table, spec, a.n_skip, options);
  write_output(c.out, format == "json" ? ar::to_json(tl).dump(2) + "\n" : ar::timeline_to_csv(tl));
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct RolloutArgs {
  std::uint64_t seed = 0;
  std::string players = "1v1";
  std::string policy = "random";
  std::string start = "random";
  std::size_t max_steps = 4500;
  std::size_t no_touch_steps = 675;
};

int run_rollout(const Common& c, const RolloutArgs& a) {
  const std::string format = extension_format(c.out, c.format, "json");
  require_format(format, {"json", "csv"});
  ar::SimConfig cfg;
  cfg.arena = resolve_arena(c.config_path);
  cfg.seed = a.seed;
  cfg.max_steps = a.max_steps;
  cfg.no_touch_steps = a.no_touch_steps;
  const ar::RewardSpec spec = resolve_spec(c.spec_path);

  ar::Policy policy;
  if (a.policy == "random") policy = ar::random_policy(a.seed);
  else if (a.policy == "chase") policy = ar::chase_ball_policy();
  else if (a.policy == "idle") policy = ar::idle_policy();
  else throw UsageError("unknown policy '" + a.policy + "'");

  ar::StateKind kind;
  if (a.start == "random") kind = ar::StateKind::Random;
  else if (a.start == "kickoff") kind = ar::StateKind::KickoffLike;
  else throw UsageError("unknown start '" + a.start + "'");

  const auto initial = ar::random_state_setter(a.seed, parse_rosters(a.players), kind, cfg);
  const auto result = ar::run_episode(spec, initial, policy, cfg);
  if (c.verbosity > 0)
    std::cerr << "rollout: " << result.steps() << " steps, " << ar::to_string(result.termination) << "\n";
  if (format == "csv") {
    // Frames only, in the replay column layout.
    std::ostringstream csv;
    ar::write_replay_csv(csv, result.states, cfg.actions_per_second());
    write_output(c.out, csv.str());
  } else {
    write_output(c.out, ar::to_json(result).dump() + "\n");
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct GraphArgs {
  std::string state;
  std::string variant = "normalized";
  std::string reading = "literal";
  double dispersion = 1.0;
  double density = 1.0;
};

int run_graph(const Common& c, const GraphArgs& a) {
  const std::string format = extension_format(c.out, c.format, "json");
  require_format(format, {"json"});
  ar::SelfConnection variant;
  if (a.variant == "unit") variant = ar::SelfConnection::Unit;
  else if (a.variant == "normalized") variant = ar::SelfConnection::Normalized;
  else throw UsageError("unknown variant '" + a.variant + "'");
  ar::AdjacencyReading reading;
  if (a.reading == "literal") reading = ar::AdjacencyReading::Literal;
  else if (a.reading == "full-row") reading = ar::AdjacencyReading::FullRow;
  else throw UsageError("unknown reading '" + a.reading + "'");
  const auto state = ar::load_state(a.state);
  const ar::DistanceShape shape{a.dispersion, a.density};
  write_output(c.out, ar::to_json(ar::build_adjacency(state, variant, shape, reading)).dump(2) + "\n");
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct ObsArgs {
  std::string state;
  std::size_t player = 0;
  std::size_t stack = 5;
  std::optional<std::size_t> capacity;
  std::string kbm_table;
  std::vector<std::string> actions;  // one KBM index list per past step, most recent first
};

int run_obs(const Common& c, const ObsArgs& a) {
  const std::string format = extension_format(c.out, c.format, "json");
  require_format(format, {"json"});
  const auto state = ar::load_state(a.state);
  if (a.player >= state.players.size()) throw UsageError("--player is outside the roster");
  const ar::KbmTable table = a.kbm_table.empty() ? ar::KbmTable::defaults()
                                                 : ar::kbm_from_json(ar::load_document(a.kbm_table));
  std::vector<ar::ActionVector> history;
  for (const auto& s : a.actions) {
    std::vector<int> raw;
    for (double v : parse_numbers(s)) raw.push_back(static_cast<int>(v));
    history.push_back(ar::parse_kbm_actions(raw, table, state.players[a.player].on_ground));
  }
  std::reverse(history.begin(), history.end());  // encoder wants oldest first
  ar::ObservationConfig cfg;
  cfg.action_stack = a.stack;
  cfg.capacity = a.capacity;
  const auto triplet = ar::encode_observation(state, a.player, history, cfg);
  write_output(c.out, ar::to_json(triplet).dump(2) + "\n");
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct AuxArgs {
  std::string timeline;
  double epsilon = ar::kRewardClassThreshold;
  std::string source = "distributed";
};

int run_aux_classify(const Common& c, const AuxArgs& a) {
  const std::string format = extension_format(c.out, c.format, "json");
  require_format(format, {"json"});
  ar::LabelSource source;
  if (a.source == "distributed") source = ar::LabelSource::Distributed;
  else if (a.source == "shaped") source = ar::LabelSource::Shaped;
  else throw UsageError("unknown label source '" + a.source + "'");
  const auto tl = ar::timeline_from_json(ar::load_document(a.timeline));
  const auto balance = ar::class_balance_report(tl, a.epsilon, source);
  write_output(c.out, ar::to_json(balance, a.epsilon).dump(2) + "\n");
  return kExitOk;
}

void add_common(CLI::App* sub, Common& c, bool with_spec, bool with_arena) {
  if (with_spec)
    sub->add_option("--spec", c.spec_path,
                    "Reward spec (.toml/.json) or a built-in name (lucy_skg, aux_ablation); "
                    "defaults to $ARENAREWARD_SPEC, then lucy_skg");
  if (with_arena) sub->add_option("--config", c.config_path, "Arena override file (.toml/.json)");
  sub->add_option("--out", c.out, "Output file, '-' for standard output")->capture_default_str();
  sub->add_option("--format", c.format, "Output format; inferred from the --out extension when omitted");
  sub->add_flag("-v,--verbose", c.verbosity, "Progress notes on the error stream");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reward shaping and arena analysis tools"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "arenareward 1.0.0");

  Common common_f, common_r, common_ro, common_g, common_o, common_cl;

  FieldArgs field;
  auto* f = app.add_subcommand("field", "Sample a reward component over the field plane");
  add_common(f, common_f, true, true);
  f->add_option("--component", field.component,
                "Component or named utility; 'potential'/'distributed' sample the spec's potential")
      ->capture_default_str();
  f->add_option("--param", field.params, "Component parameter key=value (repeatable)");
  f->add_option("--ball", field.ball, "Ball position x,y,z")->capture_default_str();
  f->add_option("--player", field.players, "Other car team:x,y,z (repeatable)");
  f->add_option("--probe-velocity", field.probe_velocity, "Probe car velocity x,y,z")->capture_default_str();
  f->add_option("--probe-boost", field.probe_boost, "Probe car boost [0,100]")->capture_default_str();
  f->add_option("--z", field.z, "Plane height")->capture_default_str();
  f->add_option("--res", field.res, "Grid resolution NXxNY")->capture_default_str();
  f->add_option("--threads", field.threads, "Worker threads, 0 = hardware")->capture_default_str();
  f->add_flag("--annotate-ball", field.annotate_ball, "Annotate the ball position in the report");

  ReplayArgs replay;
  auto* r = app.add_subcommand("replay", "Turn a replay frame CSV (or a directory of them) into a reward timeline");
  add_common(r, common_r, true, true);
  r->add_option("--in", replay.in, "Replay CSV or directory")->required();
  r->add_option("--n-skip", replay.n_skip, "Frames skipped between evaluated frames")->capture_default_str();
  r->add_option("--frame-rate", replay.frame_rate, "Frame rate used when there is no time column")
      ->capture_default_str();
  r->add_option("--column", replay.columns, "Column rename canonical=header (repeatable)");

  RolloutArgs rollout;
  auto* ro = app.add_subcommand("rollout", "Run one simulated episode; JSON episode or CSV replay frames");
  add_common(ro, common_ro, true, true);
  ro->add_option("--seed", rollout.seed, "Seed for the start state and random policy")->capture_default_str();
  ro->add_option("--players", rollout.players, "Roster such as 2v2")->capture_default_str();
  ro->add_option("--policy", rollout.policy, "random, chase or idle")->capture_default_str();
  ro->add_option("--start", rollout.start, "random or kickoff")->capture_default_str();
  ro->add_option("--max-steps", rollout.max_steps, "Time cap in steps")->capture_default_str();
  ro->add_option("--no-touch-steps", rollout.no_touch_steps, "Steps without a touch before stopping")
      ->capture_default_str();

  GraphArgs graph;
  auto* g = app.add_subcommand("graph", "Adjacency matrix for a state fixture");
  add_common(g, common_g, false, false);
  g->add_option("--state", graph.state, "State fixture (.json/.toml)")->required();
  g->add_option("--variant", graph.variant, "Self connection: unit or normalized")->capture_default_str();
  g->add_option("--reading", graph.reading, "Unit variant off-diagonal: literal or full-row")->capture_default_str();
  g->add_option("--dispersion", graph.dispersion, "Kernel dispersion")->capture_default_str();
  g->add_option("--density", graph.density, "Kernel density")->capture_default_str();

  ObsArgs obs;
  auto* o = app.add_subcommand("obs", "Observation triplet for one player of a state fixture");
  add_common(o, common_o, false, false);
  o->add_option("--state", obs.state, "State fixture (.json/.toml)")->required();
  o->add_option("--player", obs.player, "Acting player index")->capture_default_str();
  o->add_option("--stack", obs.stack, "Number of stacked previous actions")->capture_default_str();
  o->add_option("--capacity", obs.capacity, "Key/value rows (padding beyond the object count)");
  o->add_option("--kbm", obs.kbm_table, "KBM mapping table (.toml/.json)");
  o->add_option("--actions", obs.actions, "Previous KBM indices a,b,c,d,e, most recent first (repeatable)");

  AuxArgs aux;
  auto* ax = app.add_subcommand("aux", "Auxiliary-task data tools");
  ax->require_subcommand(1);
  auto* cl = ax->add_subcommand("classify", "Reward-class balance of a timeline");
  add_common(cl, common_cl, false, false);
  cl->add_option("--timeline", aux.timeline, "Timeline JSON from the replay subcommand")->required();
  cl->add_option("--epsilon", aux.epsilon, "Zero-class half width")->capture_default_str();
  cl->add_option("--source", aux.source, "distributed or shaped reward")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    if (app.get_subcommands().empty()) std::cerr << "\n" << app.help();
    return kExitUsage;
  }

  try {
    if (f->parsed()) return run_field(common_f, field);
    if (r->parsed()) return run_replay(common_r, replay);
    if (ro->parsed()) return run_rollout(common_ro, rollout);
    if (g->parsed()) return run_graph(common_g, graph);
    if (o->parsed()) return run_obs(common_o, obs);
    if (cl->parsed()) return run_aux_classify(common_cl, aux);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  std::cerr << app.help();
  return kExitUsage;
}
