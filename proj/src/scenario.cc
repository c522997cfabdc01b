#include "ilqgame/scenario.h"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <type_traits>
#include <utility>
#include <variant>

#include "ilqgame/errors.h"
#include "json.hpp"

namespace ilqgame {

using nlohmann::json;

namespace {

std::size_t line_of_offset(const std::string& text, std::size_t offset) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

std::string describe(const json& j) {
  std::string s = j.dump();
  return s.size() > 40 ? s.substr(0, 37) + "..." : s;
}

// A JSON object being read. Every key must be consumed exactly once or
// finish() reports it as unknown.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object())
      throw ParseError("expected an object", path_.empty() ? "<root>" : path_);
  }

  std::string field(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const json& at(const std::string& key) {
    if (!j_.contains(key))
      throw ParseError("missing required field", field(key));
    seen_.insert(key);
    return j_.at(key);
  }

  double number(const std::string& key) {
    const json& v = at(key);
    if (!v.is_number())
      throw ParseError("expected a number, got " + describe(v), field(key));
    return v.get<double>();
  }
  double number(const std::string& key, double fallback) {
    return has(key) ? number(key) : fallback;
  }

  std::size_t count(const std::string& key) {
    const json& v = at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0)
      throw ParseError("expected a non-negative integer, got " + describe(v),
                       field(key));
    return v.get<std::size_t>();
  }
  std::size_t count(const std::string& key, std::size_t fallback) {
    return has(key) ? count(key) : fallback;
  }

  std::string text(const std::string& key) {
    const json& v = at(key);
    if (!v.is_string())
      throw ParseError("expected a string, got " + describe(v), field(key));
    return v.get<std::string>();
  }
  std::string text(const std::string& key, const std::string& fallback) {
    return has(key) ? text(key) : fallback;
  }

  void finish() const {
    for (const auto& item : j_.items())
      if (!seen_.count(item.key()))
        throw ParseError("unknown key", field(item.key()));
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

VectorXd read_vector(const json& j, const std::string& path) {
  if (!j.is_array()) throw ParseError("expected an array of numbers", path);
  VectorXd v(static_cast<Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) {
    if (!j[k].is_number())
      throw ParseError("expected a number, got " + describe(j[k]),
                       path + "[" + std::to_string(k) + "]");
    v(static_cast<Index>(k)) = j[k].get<double>();
  }
  return v;
}

Point2 read_point(const json& j, const std::string& path) {
  VectorXd v = read_vector(j, path);
  if (v.size() != 2) throw ParseError("expected an [x, y] pair", path);
  return v;
}

Polyline2 read_polyline(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() < 2)
    throw ParseError("expected at least two [x, y] points", path);
  std::vector<Point2> points;
  for (std::size_t k = 0; k < j.size(); ++k)
    points.push_back(read_point(j[k], path + "[" + std::to_string(k) + "]"));
  try {
    return Polyline2(std::move(points));
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what(), path);
  }
}

json write_vector(const VectorXd& v) {
  json a = json::array();
  for (Index k = 0; k < v.size(); ++k) a.push_back(v(k));
  return a;
}

json write_polyline(const Polyline2& line) {
  json a = json::array();
  for (const Point2& p : line.points()) a.push_back({p.x(), p.y()});
  return a;
}

std::string join_kinds() {
  return "wall, proximity, goal, control, lane_center, lane_boundary, "
         "nominal_speed, speed_bounds";
}

struct ParseContext {
  const Geometry& geometry;
  std::optional<Point2> player_goal;
};

Polyline2 read_lane(const json& j, const std::string& path,
                    const ParseContext& ctx) {
  if (j.is_string()) {
    for (const NamedLane& lane : ctx.geometry.lanes)
      if (lane.name == j.get<std::string>()) return lane.centerline;
    throw ParseError("no lane named '" + j.get<std::string>() +
                         "' in geometry.lanes",
                     path);
  }
  return read_polyline(j, path);
}

CostPrimitive read_cost(const json& j, const std::string& path,
                        const ParseContext& ctx) {
  Reader r(j, path);
  CostPrimitive c;
  const std::string kind = r.text("kind");
  c.weight = r.number("weight");
  if (kind == "wall") {
    c.term = WallCost{r.number("half_width")};
  } else if (kind == "proximity") {
    c.term = ProximityCost{r.count("other"), r.number("threshold")};
  } else if (kind == "goal") {
    GoalCost g;
    if (r.has("goal")) {
      g.goal = read_point(r.at("goal"), r.field("goal"));
    } else if (ctx.player_goal) {
      g.goal = *ctx.player_goal;
    } else {
      throw ParseError("missing required field (player has no goal)",
                       r.field("goal"));
    }
    g.window = r.number("window", 1.0);
    c.term = g;
  } else if (kind == "control") {
    ControlCost cc;
    cc.diagonal = read_vector(r.at("diagonal"), r.field("diagonal"));
    if (r.has("player")) cc.player = r.count("player");
    c.term = cc;
  } else if (kind == "lane_center") {
    c.term = LaneCenterCost{read_lane(r.at("lane"), r.field("lane"), ctx)};
  } else if (kind == "lane_boundary") {
    LaneBoundaryCost b{read_lane(r.at("lane"), r.field("lane"), ctx), 0.0};
    if (r.has("half_width")) {
      b.half_width = r.number("half_width");
    } else if (ctx.geometry.lane_half_width) {
      b.half_width = *ctx.geometry.lane_half_width;
    } else {
      throw ParseError("missing required field (no geometry.lane_half_width)",
                       r.field("half_width"));
    }
    c.term = b;
  } else if (kind == "nominal_speed") {
    c.term = NominalSpeedCost{r.number("reference")};
  } else if (kind == "speed_bounds") {
    c.term = SpeedBoundsCost{r.number("lower"), r.number("upper")};
  } else {
    throw ParseError("unknown cost kind '" + kind + "' (expected one of " +
                         join_kinds() + ")",
                     r.field("kind"));
  }
  r.finish();
  return c;
}

json write_cost(const CostPrimitive& c, const Geometry& geometry) {
  json j;
  j["kind"] = kind_name(c.term);
  j["weight"] = c.weight;
  auto lane_ref = [&](const Polyline2& lane) -> json {
    for (const NamedLane& named : geometry.lanes)
      if (named.centerline == lane) return named.name;
    return write_polyline(lane);
  };
  std::visit(
      [&](const auto& t) {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, WallCost>) {
          j["half_width"] = t.half_width;
        } else if constexpr (std::is_same_v<T, ProximityCost>) {
          j["other"] = t.other;
          j["threshold"] = t.threshold;
        } else if constexpr (std::is_same_v<T, GoalCost>) {
          j["goal"] = {t.goal.x(), t.goal.y()};
          j["window"] = t.window;
        } else if constexpr (std::is_same_v<T, ControlCost>) {
          j["diagonal"] = write_vector(t.diagonal);
          if (t.player) j["player"] = *t.player;
        } else if constexpr (std::is_same_v<T, LaneCenterCost>) {
          j["lane"] = lane_ref(t.lane);
        } else if constexpr (std::is_same_v<T, LaneBoundaryCost>) {
          j["lane"] = lane_ref(t.lane);
          j["half_width"] = t.half_width;
        } else if constexpr (std::is_same_v<T, NominalSpeedCost>) {
          j["reference"] = t.reference;
        } else {
          j["lower"] = t.lower;
          j["upper"] = t.upper;
        }
      },
      c.term);
  return j;
}

PlayerModel read_model(const json& j, const std::string& path) {
  Reader r(j, path);
  const std::string kind = r.text("kind");
  PlayerModel m;
  try {
    m.kind = model_kind_from_string(kind);
  } catch (const InvalidArgument&) {
    throw ParseError("unknown model kind '" + kind +
                         "' (expected unicycle4d, bicycle5d or dubins3d)",
                     r.field("kind"));
  }
  if (m.kind == ModelKind::kBicycle5D)
    m.inter_axle_length = r.number("inter_axle_length");
  if (m.kind == ModelKind::kDubinsConstantSpeed3D) m.speed = r.number("speed");
  r.finish();
  return m;
}

json write_model(const PlayerModel& m) {
  json j;
  j["kind"] = to_string(m.kind);
  if (m.kind == ModelKind::kBicycle5D)
    j["inter_axle_length"] = m.inter_axle_length;
  if (m.kind == ModelKind::kDubinsConstantSpeed3D) j["speed"] = m.speed;
  return j;
}

PlayerSpec read_player(const json& j, const std::string& path,
                       const Geometry& geometry) {
  Reader r(j, path);
  PlayerSpec p;
  p.name = r.text("name");
  p.model = read_model(r.at("model"), r.field("model"));
  p.initial_state = read_vector(r.at("initial_state"), r.field("initial_state"));
  if (r.has("goal")) p.goal = read_point(r.at("goal"), r.field("goal"));
  if (r.has("regularization")) {
    Reader reg(r.at("regularization"), r.field("regularization"));
    p.state_regularization = reg.number("state", 0.0);
    p.control_regularization = reg.number("control", 0.0);
    reg.finish();
  }
  const json& costs = r.at("costs");
  if (!costs.is_array())
    throw ParseError("expected an array of cost terms", r.field("costs"));
  ParseContext ctx{geometry, p.goal};
  for (std::size_t k = 0; k < costs.size(); ++k)
    p.costs.push_back(read_cost(
        costs[k], r.field("costs") + "[" + std::to_string(k) + "]", ctx));
  if (!p.goal) {
    for (const CostPrimitive& c : p.costs)
      if (const auto* g = std::get_if<GoalCost>(&c.term)) {
        p.goal = g->goal;
        break;
      }
  }
  r.finish();
  return p;
}

SolverConfig read_solver(const json& j, const std::string& path) {
  Reader r(j, path);
  SolverConfig c;
  c.step_size = r.number("step_size", c.step_size);
  const std::string policy = r.text("step_policy", "fixed");
  if (policy == "fixed") {
    c.step_policy = StepPolicy::kFixed;
  } else if (policy == "decay") {
    c.step_policy = StepPolicy::kDecay;
  } else {
    throw ParseError("expected 'fixed' or 'decay'", r.field("step_policy"));
  }
  c.decay_rate = r.number("decay_rate", c.decay_rate);
  c.tolerance = r.number("tolerance", c.tolerance);
  c.max_iterations = r.count("max_iterations", c.max_iterations);
  c.max_step_halvings = r.count("max_step_halvings", c.max_step_halvings);
  if (r.has("regularization")) {
    Reader reg(r.at("regularization"), r.field("regularization"));
    c.regularization.initial = reg.number("initial", c.regularization.initial);
    c.regularization.growth = reg.number("growth", c.regularization.growth);
    c.regularization.cap = reg.number("cap", c.regularization.cap);
    reg.finish();
  }
  r.finish();
  return c;
}

json write_solver(const SolverConfig& c) {
  json j;
  j["step_size"] = c.step_size;
  j["step_policy"] = c.step_policy == StepPolicy::kFixed ? "fixed" : "decay";
  j["decay_rate"] = c.decay_rate;
  j["tolerance"] = c.tolerance;
  j["max_iterations"] = c.max_iterations;
  j["max_step_halvings"] = c.max_step_halvings;
  j["regularization"] = {{"initial", c.regularization.initial},
                         {"growth", c.regularization.growth},
                         {"cap", c.regularization.cap}};
  return j;
}

Geometry read_geometry(const json& j, const std::string& path) {
  Reader r(j, path);
  Geometry g;
  if (r.has("hall_half_width")) g.hall_half_width = r.number("hall_half_width");
  if (r.has("lane_half_width")) g.lane_half_width = r.number("lane_half_width");
  if (r.has("lanes")) {
    const json& lanes = r.at("lanes");
    if (!lanes.is_array())
      throw ParseError("expected an array of lanes", r.field("lanes"));
    for (std::size_t k = 0; k < lanes.size(); ++k) {
      Reader lr(lanes[k], r.field("lanes") + "[" + std::to_string(k) + "]");
      NamedLane lane;
      lane.name = lr.text("name");
      lane.centerline = read_polyline(lr.at("points"), lr.field("points"));
      lr.finish();
      g.lanes.push_back(std::move(lane));
    }
  }
  r.finish();
  return g;
}

SinusoidRanges read_sampling(const json& j, const std::string& path) {
  Reader r(j, path);
  SinusoidRanges s;
  auto range = [&](const std::string& key, double& lo, double& hi) {
    if (!r.has(key)) return;
    VectorXd v = read_vector(r.at(key), r.field(key));
    if (v.size() != 2) throw ParseError("expected [min, max]", r.field(key));
    lo = v(0);
    hi = v(1);
  };
  range("amplitude", s.amplitude_min, s.amplitude_max);
  range("frequency", s.frequency_min, s.frequency_max);
  range("phase", s.phase_min, s.phase_max);
  r.finish();
  return s;
}

RecedingSpec read_receding(const json& j, const std::string& path) {
  Reader r(j, path);
  RecedingSpec s;
  s.episode = r.number("episode", s.episode);
  s.replan_interval = r.number("replan_interval", s.replan_interval);
  if (r.has("disturbances")) {
    const json& d = r.at("disturbances");
    if (!d.is_array())
      throw ParseError("expected an array", r.field("disturbances"));
    for (std::size_t k = 0; k < d.size(); ++k) {
      Reader dr(d[k], r.field("disturbances") + "[" + std::to_string(k) + "]");
      Disturbance dist;
      dist.player = dr.count("player");
      dist.start = dr.number("start");
      dist.duration = dr.number("duration");
      dist.control = read_vector(dr.at("control"), dr.field("control"));
      dr.finish();
      s.disturbances.push_back(std::move(dist));
    }
  }
  r.finish();
  return s;
}

[[noreturn]] void invalid(const std::string& what, const std::string& field) {
  throw ParseError(what, field);
}

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }
bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

void validate_cost(const CostPrimitive& c, const ScenarioSpec& spec,
                   PlayerIndex owner, const std::string& path) {
  if (!finite_nonneg(c.weight))
    invalid("weight must be finite and non-negative", path + ".weight");
  const PlayerModel& model = spec.players[owner].model;
  std::visit(
      [&](const auto& t) {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, WallCost>) {
          if (!finite_positive(t.half_width))
            invalid("must be positive", path + ".half_width");
        } else if constexpr (std::is_same_v<T, ProximityCost>) {
          if (t.other >= spec.players.size() || t.other == owner)
            invalid("must name another player", path + ".other");
          if (!finite_positive(t.threshold))
            invalid("must be positive", path + ".threshold");
        } else if constexpr (std::is_same_v<T, GoalCost>) {
          if (!t.goal.allFinite()) invalid("must be finite", path + ".goal");
          if (!finite_positive(t.window))
            invalid("must be positive", path + ".window");
        } else if constexpr (std::is_same_v<T, ControlCost>) {
          const PlayerIndex target = t.player.value_or(owner);
          if (target >= spec.players.size())
            invalid("no such player", path + ".player");
          if (t.diagonal.size() != spec.players[target].model.control_dim())
            invalid("expected " +
                        std::to_string(
                            spec.players[target].model.control_dim()) +
                        " entries",
                    path + ".diagonal");
          for (Index k = 0; k < t.diagonal.size(); ++k)
            if (!finite_nonneg(t.diagonal(k)))
              invalid("entries must be non-negative", path + ".diagonal");
        } else if constexpr (std::is_same_v<T, LaneBoundaryCost>) {
          if (!finite_positive(t.half_width))
            invalid("must be positive", path + ".half_width");
        } else if constexpr (std::is_same_v<T, NominalSpeedCost>) {
          if (model.speed_index() < 0)
            invalid("player's model has no speed state", path + ".kind");
          if (!std::isfinite(t.reference))
            invalid("must be finite", path + ".reference");
        } else if constexpr (std::is_same_v<T, SpeedBoundsCost>) {
          if (model.speed_index() < 0)
            invalid("player's model has no speed state", path + ".kind");
          if (!std::isfinite(t.lower) || !std::isfinite(t.upper) ||
              t.lower > t.upper)
            invalid("need finite lower <= upper", path + ".upper");
        }
      },
      c.term);
}

}  // namespace

bool PlayerSpec::operator==(const PlayerSpec& o) const {
  return name == o.name && model == o.model &&
         initial_state.size() == o.initial_state.size() &&
         initial_state == o.initial_state && goal == o.goal &&
         costs == o.costs && state_regularization == o.state_regularization &&
         control_regularization == o.control_regularization;
}

bool ScenarioSpec::operator==(const ScenarioSpec& o) const {
  const SolverConfig& a = solver;
  const SolverConfig& b = o.solver;
  const bool same_solver =
      a.discretization.dt == b.discretization.dt &&
      a.discretization.horizon == b.discretization.horizon &&
      a.step_size == b.step_size && a.step_policy == b.step_policy &&
      a.decay_rate == b.decay_rate && a.tolerance == b.tolerance &&
      a.max_iterations == b.max_iterations &&
      a.max_step_halvings == b.max_step_halvings &&
      a.regularization.initial == b.regularization.initial &&
      a.regularization.growth == b.regularization.growth &&
      a.regularization.cap == b.regularization.cap;
  return name == o.name && players == o.players && time.dt == o.time.dt &&
         time.horizon == o.time.horizon && same_solver &&
         geometry == o.geometry && sampling == o.sampling &&
         clustering == o.clustering && receding == o.receding;
}

void validate_scenario(const ScenarioSpec& spec) {
  if (spec.players.empty()) invalid("at least one player required", "players");
  if (!finite_positive(spec.time.dt)) invalid("must be positive", "time.dt");
  if (!finite_positive(spec.time.horizon) || spec.time.num_steps() < 1)
    invalid("must be positive and at least one step", "time.horizon");
  try {
    spec.solver.validate();
  } catch (const InvalidArgument& e) {
    invalid(e.what(), "solver");
  }

  const Geometry& g = spec.geometry;
  if (g.hall_half_width && !finite_positive(*g.hall_half_width))
    invalid("must be positive", "geometry.hall_half_width");
  if (g.lane_half_width && !finite_positive(*g.lane_half_width))
    invalid("must be positive", "geometry.lane_half_width");

  for (std::size_t i = 0; i < spec.players.size(); ++i) {
    const PlayerSpec& p = spec.players[i];
    const std::string path = "players[" + std::to_string(i) + "]";
    if (p.model.kind == ModelKind::kBicycle5D &&
        !finite_positive(p.model.inter_axle_length))
      invalid("must be positive", path + ".model.inter_axle_length");
    if (p.model.kind == ModelKind::kDubinsConstantSpeed3D &&
        !std::isfinite(p.model.speed))
      invalid("must be finite", path + ".model.speed");
    if (p.initial_state.size() != p.model.state_dim())
      invalid("expected " + std::to_string(p.model.state_dim()) +
                  " entries for " + to_string(p.model.kind),
              path + ".initial_state");
    if (!p.initial_state.allFinite())
      invalid("must be finite", path + ".initial_state");
    if (g.hall_half_width &&
        std::abs(p.initial_state(PlayerModel::kPy)) > *g.hall_half_width)
      invalid("initial position lies outside the hallway",
              path + ".initial_state");
    if (!finite_nonneg(p.state_regularization))
      invalid("must be non-negative", path + ".regularization.state");
    if (!finite_nonneg(p.control_regularization))
      invalid("must be non-negative", path + ".regularization.control");
    for (std::size_t k = 0; k < p.costs.size(); ++k)
      validate_cost(p.costs[k], spec, i,
                    path + ".costs[" + std::to_string(k) + "]");
  }

  const SinusoidRanges& s = spec.sampling;
  if (!finite_nonneg(s.amplitude_min) || !std::isfinite(s.amplitude_max) ||
      s.amplitude_min > s.amplitude_max)
    invalid("need 0 <= min <= max", "sampling.amplitude");
  if (!finite_nonneg(s.frequency_min) || !std::isfinite(s.frequency_max) ||
      s.frequency_min > s.frequency_max)
    invalid("need 0 <= min <= max", "sampling.frequency");
  if (!std::isfinite(s.phase_min) || !std::isfinite(s.phase_max) ||
      s.phase_min > s.phase_max)
    invalid("need min <= max", "sampling.phase");
  if (!finite_positive(spec.clustering.threshold))
    invalid("must be positive", "clustering.threshold");

  if (spec.receding) {
    const RecedingSpec& r = *spec.receding;
    if (!finite_positive(r.episode)) invalid("must be positive", "receding.episode");
    if (!finite_positive(r.replan_interval))
      invalid("must be positive", "receding.replan_interval");
    for (std::size_t k = 0; k < r.disturbances.size(); ++k) {
      const Disturbance& d = r.disturbances[k];
      const std::string path = "receding.disturbances[" + std::to_string(k) + "]";
      if (d.player >= spec.players.size()) invalid("no such player", path + ".player");
      if (d.control.size() != spec.players[d.player].model.control_dim())
        invalid("wrong control dimension", path + ".control");
      if (!finite_nonneg(d.start) || !finite_nonneg(d.duration))
        invalid("times must be non-negative", path);
    }
  }
}

ScenarioSpec parse_scenario(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed document: ") + e.what(), "<root>",
                     line_of_offset(text, e.byte == 0 ? 0 : e.byte - 1));
  }

  Reader r(doc, "");
  ScenarioSpec spec;
  spec.name = r.text("name");
  {
    Reader t(r.at("time"), "time");
    spec.time.dt = t.number("dt");
    spec.time.horizon = t.number("horizon");
    t.finish();
  }
  if (r.has("solver")) spec.solver = read_solver(r.at("solver"), "solver");
  spec.solver.discretization = spec.time;
  if (r.has("geometry")) spec.geometry = read_geometry(r.at("geometry"), "geometry");
  if (r.has("sampling")) spec.sampling = read_sampling(r.at("sampling"), "sampling");
  if (r.has("clustering")) {
    Reader c(r.at("clustering"), "clustering");
    spec.clustering.threshold = c.number("threshold", spec.clustering.threshold);
    spec.clustering.min_size = c.count("min_size", spec.clustering.min_size);
    c.finish();
  }
  if (r.has("receding")) spec.receding = read_receding(r.at("receding"), "receding");

  const json& players = r.at("players");
  if (!players.is_array()) throw ParseError("expected an array", "players");
  for (std::size_t i = 0; i < players.size(); ++i)
    spec.players.push_back(read_player(
        players[i], "players[" + std::to_string(i) + "]", spec.geometry));
  r.finish();

  validate_scenario(spec);
  return spec;
}

ScenarioSpec load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario file", path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str());
}

std::string serialize_scenario(const ScenarioSpec& spec) {
  json doc;
  doc["name"] = spec.name;
  doc["time"] = {{"dt", spec.time.dt}, {"horizon", spec.time.horizon}};
  doc["solver"] = write_solver(spec.solver);

  json geometry = json::object();
  if (spec.geometry.hall_half_width)
    geometry["hall_half_width"] = *spec.geometry.hall_half_width;
  if (spec.geometry.lane_half_width)
    geometry["lane_half_width"] = *spec.geometry.lane_half_width;
  if (!spec.geometry.lanes.empty()) {
    json lanes = json::array();
    for (const NamedLane& lane : spec.geometry.lanes)
      lanes.push_back(
          {{"name", lane.name}, {"points", write_polyline(lane.centerline)}});
    geometry["lanes"] = lanes;
  }
  doc["geometry"] = geometry;

  const SinusoidRanges& s = spec.sampling;
  doc["sampling"] = {{"amplitude", {s.amplitude_min, s.amplitude_max}},
                     {"frequency", {s.frequency_min, s.frequency_max}},
                     {"phase", {s.phase_min, s.phase_max}}};
  doc["clustering"] = {{"threshold", spec.clustering.threshold},
                       {"min_size", spec.clustering.min_size}};
  if (spec.receding) {
    json d = json::array();
    for (const Disturbance& dist : spec.receding->disturbances)
      d.push_back({{"player", dist.player},
                   {"start", dist.start},
                   {"duration", dist.duration},
                   {"control", write_vector(dist.control)}});
    doc["receding"] = {{"episode", spec.receding->episode},
                       {"replan_interval", spec.receding->replan_interval},
                       {"disturbances", d}};
  }

  json players = json::array();
  for (const PlayerSpec& p : spec.players) {
    json j;
    j["name"] = p.name;
    j["model"] = write_model(p.model);
    j["initial_state"] = write_vector(p.initial_state);
    if (p.goal) j["goal"] = {p.goal->x(), p.goal->y()};
    j["regularization"] = {{"state", p.state_regularization},
                           {"control", p.control_regularization}};
    json costs = json::array();
    for (const CostPrimitive& c : p.costs)
      costs.push_back(write_cost(c, spec.geometry));
    j["costs"] = costs;
    players.push_back(j);
  }
  doc["players"] = players;
  return doc.dump(2) + "\n";
}

Problem build_problem(const ScenarioSpec& spec) {
  VectorXd x0;
  Index n = 0;
  for (const PlayerSpec& p : spec.players) n += p.initial_state.size();
  x0.resize(n);
  Index offset = 0;
  for (const PlayerSpec& p : spec.players) {
    x0.segment(offset, p.initial_state.size()) = p.initial_state;
    offset += p.initial_state.size();
  }
  return build_problem(spec, x0);
}

Problem build_problem(const ScenarioSpec& spec, const VectorXd& x0) {
  std::vector<PlayerModel> models;
  for (const PlayerSpec& p : spec.players) models.push_back(p.model);
  MultiPlayerSystem system(std::move(models));
  if (x0.size() != system.state_dim())
    throw InvalidArgument("initial state has " + std::to_string(x0.size()) +
                          " entries, expected " +
                          std::to_string(system.state_dim()));
  const auto layouts = layouts_of(system);
  std::vector<PlayerCost> costs;
  for (std::size_t i = 0; i < spec.players.size(); ++i)
    costs.emplace_back(i, spec.players[i].costs, layouts, system.state_dim(),
                       spec.time.horizon, spec.players[i].state_regularization,
                       spec.players[i].control_regularization);
  SolverConfig config = spec.solver;
  config.discretization = spec.time;
  return Problem{std::move(system), std::move(costs), x0, config};
}

}  // namespace ilqgame
