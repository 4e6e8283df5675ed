#include "quantq/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace quantq {

using nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string index_path(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

void expect_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path.empty() ? "<root>" : path, "expected an object");
}

void allow_keys(const json& j, const std::string& path, std::initializer_list<const char*> keys) {
  expect_object(j, path);
  for (const auto& [k, _] : j.items()) {
    if (std::none_of(keys.begin(), keys.end(), [&](const char* a) { return k == a; }))
      throw ConfigError(join(path, k), "unknown key");
  }
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(path, "must be finite");
  return v;
}

double as_positive(const json& j, const std::string& path) {
  const double v = as_number(j, path);
  if (!(v > 0.0)) throw ConfigError(path, "must be positive");
  return v;
}

std::uint64_t as_uint(const json& j, const std::string& path) {
  if (!j.is_number_integer() || (j.is_number_integer() && !j.is_number_unsigned() && j.get<std::int64_t>() < 0))
    throw ConfigError(path, "expected a non-negative integer");
  return j.get<std::uint64_t>();
}

std::size_t as_count(const json& j, const std::string& path) {
  const auto v = as_uint(j, path);
  if (v == 0) throw ConfigError(path, "must be at least 1");
  return static_cast<std::size_t>(v);
}

bool as_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) throw ConfigError(path, "expected true or false");
  return j.get<bool>();
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError(path, "expected a string");
  return j.get<std::string>();
}

template <class F>
auto as_list(const json& j, const std::string& path, F&& item) {
  if (!j.is_array()) throw ConfigError(path, "expected a list");
  std::vector<decltype(item(j, path))> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(item(j[i], index_path(path, i)));
  return out;
}

template <class F>
void optional_field(const json& obj, const char* key, const std::string& path, F&& f) {
  if (obj.contains(key)) f(obj.at(key), join(path, key));
}

EnvironmentConfig parse_environment(const json& j, const std::string& path) {
  allow_keys(j, path, {"name", "params"});
  if (!j.contains("name")) throw ConfigError(join(path, "name"), "missing required field");
  EnvironmentConfig c;
  c.name = as_string(j.at("name"), join(path, "name"));
  const json params = j.contains("params") ? j.at("params") : json::object();
  const std::string pp = join(path, "params");
  if (c.name == "fisheries") {
    allow_keys(params, pp, {"theta1", "theta2", "kappa_min", "kappa_max", "lambda"});
    optional_field(params, "theta1", pp, [&](const json& v, const std::string& p) { c.ricker.theta1 = as_positive(v, p); });
    optional_field(params, "theta2", pp, [&](const json& v, const std::string& p) { c.ricker.theta2 = as_positive(v, p); });
    optional_field(params, "kappa_min", pp, [&](const json& v, const std::string& p) { c.ricker.kappa_min = as_number(v, p); });
    optional_field(params, "kappa_max", pp, [&](const json& v, const std::string& p) { c.ricker.kappa_max = as_number(v, p); });
    optional_field(params, "lambda", pp, [&](const json& v, const std::string& p) { c.ricker.lambda = as_positive(v, p); });
    if (c.ricker.kappa_min < 0.0) throw ConfigError(join(pp, "kappa_min"), "must be non-negative");
    if (!(c.ricker.kappa_min < c.ricker.kappa_max)) throw ConfigError(join(pp, "kappa_max"), "must exceed kappa_min");
  } else if (c.name == "additive-noise") {
    allow_keys(params, pp, {"action_bound", "sigma", "drift_x", "drift_a", "truncation_radius", "clamp_radius"});
    optional_field(params, "action_bound", pp, [&](const json& v, const std::string& p) { c.action_bound = as_positive(v, p); });
    optional_field(params, "sigma", pp, [&](const json& v, const std::string& p) { c.sigma = as_positive(v, p); });
    optional_field(params, "drift_x", pp, [&](const json& v, const std::string& p) { c.drift_x = as_number(v, p); });
    optional_field(params, "drift_a", pp, [&](const json& v, const std::string& p) { c.drift_a = as_number(v, p); });
    optional_field(params, "truncation_radius", pp,
                   [&](const json& v, const std::string& p) { c.truncation_radius = as_positive(v, p); });
    optional_field(params, "clamp_radius", pp, [&](const json& v, const std::string& p) { c.clamp_radius = as_positive(v, p); });
  } else if (c.name == "finite-chain") {
    allow_keys(params, pp, {"transitions", "costs"});
    if (!params.contains("transitions")) throw ConfigError(join(pp, "transitions"), "missing required field");
    if (!params.contains("costs")) throw ConfigError(join(pp, "costs"), "missing required field");
    c.transitions = as_list(params.at("transitions"), join(pp, "transitions"), [](const json& s, const std::string& sp) {
      return as_list(s, sp, [](const json& a, const std::string& ap) { return as_list(a, ap, as_number); });
    });
    c.costs = as_list(params.at("costs"), join(pp, "costs"),
                      [](const json& s, const std::string& sp) { return as_list(s, sp, as_number); });
    try {
      FiniteChainEnv probe(c.transitions, c.costs);
    } catch (const std::exception& e) {
      throw ConfigError(pp, e.what());
    }
  } else {
    throw ConfigError(join(path, "name"), "unknown environment '" + c.name +
                                              "' (expected fisheries, additive-noise or finite-chain)");
  }
  return c;
}

QuantizerConfig parse_quantizer(const json& j, const std::string& path) {
  allow_keys(j, path, {"kind", "lower", "upper", "M", "levels", "schedule"});
  QuantizerConfig c;
  const std::string kind = j.contains("kind") ? as_string(j.at("kind"), join(path, "kind")) : "uniform";
  if (kind == "uniform") {
    c.kind = QuantizerConfig::Kind::kUniform;
    for (const char* k : {"levels", "schedule"})
      if (j.contains(k)) throw ConfigError(join(path, k), "only valid for kind 'overflow'");
    optional_field(j, "lower", path, [&](const json& v, const std::string& p) { c.lower = as_number(v, p); });
    optional_field(j, "upper", path, [&](const json& v, const std::string& p) { c.upper = as_number(v, p); });
    if (c.lower && c.upper && !(*c.lower < *c.upper)) throw ConfigError(join(path, "upper"), "must exceed lower");
    if (!j.contains("M")) throw ConfigError(join(path, "M"), "missing required field");
    const json& m = j.at("M");
    c.cells = m.is_array() ? as_list(m, join(path, "M"), as_count) : std::vector<std::size_t>{as_count(m, join(path, "M"))};
    if (c.cells.empty()) throw ConfigError(join(path, "M"), "must list at least one resolution");
  } else if (kind == "overflow") {
    c.kind = QuantizerConfig::Kind::kOverflow;
    for (const char* k : {"lower", "upper", "M"})
      if (j.contains(k)) throw ConfigError(join(path, k), "only valid for kind 'uniform'");
    if (j.contains("levels") == j.contains("schedule"))
      throw ConfigError(join(path, "levels"), "give exactly one of 'levels' or 'schedule'");
    if (j.contains("levels")) {
      const std::string lp = join(path, "levels");
      const json& levels = j.at("levels");
      if (!levels.is_array() || levels.empty()) throw ConfigError(lp, "expected a non-empty list");
      for (std::size_t i = 0; i < levels.size(); ++i) {
        const std::string ip = index_path(lp, i);
        allow_keys(levels[i], ip, {"n", "radius", "bin_length"});
        for (const char* k : {"radius", "bin_length"})
          if (!levels[i].contains(k)) throw ConfigError(join(ip, k), "missing required field");
        const std::size_t label = levels[i].contains("n") ? as_count(levels[i].at("n"), join(ip, "n")) : i + 1;
        c.levels.push_back({label, as_positive(levels[i].at("radius"), join(ip, "radius")),
                            as_positive(levels[i].at("bin_length"), join(ip, "bin_length"))});
      }
    } else {
      const std::string sp = join(path, "schedule");
      const json& s = j.at("schedule");
      allow_keys(s, sp, {"first", "last", "base", "step", "bin_lengths"});
      for (const char* k : {"first", "last", "base", "step", "bin_lengths"})
        if (!s.contains(k)) throw ConfigError(join(sp, k), "missing required field");
      const auto first = as_count(s.at("first"), join(sp, "first"));
      const auto last = as_count(s.at("last"), join(sp, "last"));
      if (last < first) throw ConfigError(join(sp, "last"), "must be >= first");
      const double base = as_number(s.at("base"), join(sp, "base"));
      const double step = as_number(s.at("step"), join(sp, "step"));
      const std::string bp = join(sp, "bin_lengths");
      struct Piece {
        std::size_t through;
        double length;
      };
      std::vector<Piece> pieces;
      const json& bl = s.at("bin_lengths");
      if (!bl.is_array() || bl.empty()) throw ConfigError(bp, "expected a non-empty list");
      for (std::size_t i = 0; i < bl.size(); ++i) {
        const std::string ip = index_path(bp, i);
        allow_keys(bl[i], ip, {"through", "length"});
        for (const char* k : {"through", "length"})
          if (!bl[i].contains(k)) throw ConfigError(join(ip, k), "missing required field");
        pieces.push_back({as_count(bl[i].at("through"), join(ip, "through")), as_positive(bl[i].at("length"), join(ip, "length"))});
        if (i > 0 && pieces[i].through <= pieces[i - 1].through)
          throw ConfigError(join(ip, "through"), "must increase along the list");
      }
      if (pieces.back().through < last) throw ConfigError(bp, "does not cover the last schedule index");
      for (std::size_t n = first; n <= last; ++n) {
        const double radius = base + step * static_cast<double>(n);
        if (!(radius > 0.0)) throw ConfigError(sp, "radius for n=" + std::to_string(n) + " is not positive");
        const auto piece = std::find_if(pieces.begin(), pieces.end(), [&](const Piece& p) { return n <= p.through; });
        c.levels.push_back({n, radius, piece->length});
      }
    }
  } else {
    throw ConfigError(join(path, "kind"), "expected 'uniform' or 'overflow'");
  }
  return c;
}

ActionNetConfig parse_action_net(const json& j, const std::string& path) {
  allow_keys(j, path, {"points", "bin_length"});
  ActionNetConfig c;
  if (j.contains("points") == j.contains("bin_length"))
    throw ConfigError(join(path, "points"), "give exactly one of 'points' or 'bin_length'");
  optional_field(j, "points", path, [&](const json& v, const std::string& p) { c.points = as_count(v, p); });
  optional_field(j, "bin_length", path, [&](const json& v, const std::string& p) { c.bin_length = as_positive(v, p); });
  return c;
}

WeightingConfig parse_weighting(const json& j, const std::string& path) {
  allow_keys(j, path, {"kind", "trajectory_steps"});
  WeightingConfig c;
  const std::string kind = j.contains("kind") ? as_string(j.at("kind"), join(path, "kind")) : "uniform";
  if (kind == "uniform")
    c.kind = WeightingMeasure::Kind::kUniformOnBin;
  else if (kind == "empirical")
    c.kind = WeightingMeasure::Kind::kEmpirical;
  else
    throw ConfigError(join(path, "kind"), "expected 'uniform' or 'empirical'");
  optional_field(j, "trajectory_steps", path, [&](const json& v, const std::string& p) { c.trajectory_steps = as_count(v, p); });
  return c;
}

ModelConfig parse_model(const json& j, const std::string& path) {
  allow_keys(j, path, {"outer_samples", "inner_samples", "path"});
  ModelConfig c;
  optional_field(j, "outer_samples", path, [&](const json& v, const std::string& p) { c.outer_samples = as_count(v, p); });
  optional_field(j, "inner_samples", path, [&](const json& v, const std::string& p) { c.inner_samples = as_count(v, p); });
  optional_field(j, "path", path, [&](const json& v, const std::string& p) { c.path = as_string(v, p); });
  return c;
}

SolverConfig parse_solver(const json& j, const std::string& path) {
  allow_keys(j, path, {"tol", "max_iters"});
  SolverConfig c;
  optional_field(j, "tol", path, [&](const json& v, const std::string& p) { c.tol = as_positive(v, p); });
  optional_field(j, "max_iters", path, [&](const json& v, const std::string& p) { c.max_iters = as_count(v, p); });
  return c;
}

LearningConfig parse_learning(const json& j, const std::string& path) {
  allow_keys(j, path, {"steps_per_state_action", "total_steps", "episode_length", "seeds", "step_size", "exploration",
                       "q0", "checkpoints", "visit_floor", "log_updates"});
  LearningConfig c;
  optional_field(j, "steps_per_state_action", path,
                 [&](const json& v, const std::string& p) { c.steps_per_state_action = as_uint(v, p); });
  optional_field(j, "total_steps", path, [&](const json& v, const std::string& p) { c.total_steps = as_uint(v, p); });
  optional_field(j, "episode_length", path, [&](const json& v, const std::string& p) { c.episode_length = as_uint(v, p); });
  optional_field(j, "seeds", path, [&](const json& v, const std::string& p) {
    c.seeds = as_list(v, p, as_uint);
    if (c.seeds.empty()) throw ConfigError(p, "must list at least one seed");
  });
  optional_field(j, "step_size", path, [&](const json& v, const std::string& p) {
    const auto s = as_string(v, p);
    if (s == "sample-average")
      c.step_size = StepSizeRule::kSampleAverage;
    else if (s == "post-increment")
      c.step_size = StepSizeRule::kPostIncrement;
    else
      throw ConfigError(p, "expected 'sample-average' or 'post-increment'");
  });
  optional_field(j, "exploration", path, [&](const json& v, const std::string& p) {
    if (as_string(v, p) != "uniform") throw ConfigError(p, "only 'uniform' exploration is available from config");
  });
  optional_field(j, "q0", path, [&](const json& v, const std::string& p) { c.q0 = as_number(v, p); });
  optional_field(j, "checkpoints", path, [&](const json& v, const std::string& p) { c.checkpoints = as_list(v, p, as_uint); });
  optional_field(j, "visit_floor", path, [&](const json& v, const std::string& p) { c.visit_floor = as_uint(v, p); });
  optional_field(j, "log_updates", path, [&](const json& v, const std::string& p) { c.log_updates = as_bool(v, p); });
  return c;
}

EvalConfig parse_eval(const json& j, const std::string& path) {
  allow_keys(j, path, {"x0", "horizon", "n_rollouts", "truncation_eps", "qtable"});
  EvalConfig c;
  optional_field(j, "x0", path, [&](const json& v, const std::string& p) {
    c.x0 = v.is_array() ? as_list(v, p, as_number) : std::vector<double>{as_number(v, p)};
  });
  optional_field(j, "horizon", path, [&](const json& v, const std::string& p) { c.horizon = as_uint(v, p); });
  optional_field(j, "n_rollouts", path, [&](const json& v, const std::string& p) { c.n_rollouts = as_count(v, p); });
  optional_field(j, "truncation_eps", path, [&](const json& v, const std::string& p) { c.truncation_eps = as_positive(v, p); });
  optional_field(j, "qtable", path, [&](const json& v, const std::string& p) { c.qtable = as_string(v, p); });
  return c;
}

BoundConfig parse_bound(const json& j, const std::string& path) {
  allow_keys(j, path, {"kinds", "alpha_c", "alpha_t", "c_sup", "alpha_cover", "loss_values", "tail_majorant",
                       "loss_series", "probe_pairs", "probe_samples"});
  BoundConfig c;
  optional_field(j, "kinds", path, [&](const json& v, const std::string& p) {
    c.kinds = as_list(v, p, as_string);
    static const std::set<std::string> known{"tv-value", "tv-policy", "w1-value", "w1-policy", "rate"};
    for (std::size_t i = 0; i < c.kinds.size(); ++i)
      if (!known.count(c.kinds[i]))
        throw ConfigError(index_path(p, i), "unknown bound '" + c.kinds[i] +
                                                "' (expected tv-value, tv-policy, w1-value, w1-policy or rate)");
  });
  auto nonneg = [](const json& v, const std::string& p) {
    const double x = as_number(v, p);
    if (x < 0.0) throw ConfigError(p, "must be non-negative");
    return x;
  };
  optional_field(j, "alpha_c", path, [&](const json& v, const std::string& p) { c.alpha_c = nonneg(v, p); });
  optional_field(j, "alpha_t", path, [&](const json& v, const std::string& p) { c.alpha_t = nonneg(v, p); });
  optional_field(j, "c_sup", path, [&](const json& v, const std::string& p) { c.c_sup = nonneg(v, p); });
  optional_field(j, "alpha_cover", path, [&](const json& v, const std::string& p) { c.alpha_cover = as_positive(v, p); });
  optional_field(j, "loss_values", path, [&](const json& v, const std::string& p) { c.loss_values = as_list(v, p, nonneg); });
  optional_field(j, "tail_majorant", path, [&](const json& v, const std::string& p) { c.tail_majorant = nonneg(v, p); });
  optional_field(j, "loss_series", path, [&](const json& v, const std::string& p) {
    allow_keys(v, p, {"horizon", "n_rollouts"});
    optional_field(v, "horizon", p, [&](const json& w, const std::string& q) { c.loss_series.horizon = as_uint(w, q); });
    optional_field(v, "n_rollouts", p, [&](const json& w, const std::string& q) { c.loss_series.n_rollouts = as_count(w, q); });
  });
  optional_field(j, "probe_pairs", path, [&](const json& v, const std::string& p) { c.probe_pairs = as_count(v, p); });
  optional_field(j, "probe_samples", path, [&](const json& v, const std::string& p) { c.probe_samples = as_count(v, p); });
  return c;
}

OutputConfig parse_output(const json& j, const std::string& path) {
  allow_keys(j, path, {"dir", "plot", "timing"});
  OutputConfig c;
  optional_field(j, "dir", path, [&](const json& v, const std::string& p) { c.dir = as_string(v, p); });
  optional_field(j, "plot", path, [&](const json& v, const std::string& p) { c.plot = as_bool(v, p); });
  optional_field(j, "timing", path, [&](const json& v, const std::string& p) { c.timing = as_bool(v, p); });
  return c;
}

}  // namespace

Config parse_config(const json& j) {
  allow_keys(j, "", {"environment", "beta", "seed", "jobs", "quantizer", "action_net", "weighting", "model", "solver",
                     "learning", "eval", "bound", "output"});
  Config c;
  if (!j.contains("environment")) throw ConfigError("environment", "missing required block");
  c.environment = parse_environment(j.at("environment"), "environment");
  optional_field(j, "beta", "", [&](const json& v, const std::string& p) {
    c.beta = as_number(v, p);
    if (!(c.beta > 0.0 && c.beta < 1.0)) throw ConfigError(p, "must lie in (0, 1), got " + v.dump());
  });
  optional_field(j, "seed", "", [&](const json& v, const std::string& p) { c.seed = as_uint(v, p); });
  optional_field(j, "jobs", "", [&](const json& v, const std::string& p) { c.jobs = as_count(v, p); });

  const bool chain = c.environment.name == "finite-chain";
  if (j.contains("quantizer")) {
    c.quantizer = parse_quantizer(j.at("quantizer"), "quantizer");
  } else if (chain) {
    const auto s = c.environment.costs.size();
    c.quantizer.lower = -0.5;
    c.quantizer.upper = static_cast<double>(s) - 0.5;
    c.quantizer.cells = {s};
  } else {
    throw ConfigError("quantizer", "missing required block");
  }
  if (j.contains("action_net"))
    c.action_net = parse_action_net(j.at("action_net"), "action_net");
  else if (chain)
    c.action_net.points = c.environment.costs.front().size();
  else
    throw ConfigError("action_net", "missing required block");

  optional_field(j, "weighting", "", [&](const json& v, const std::string& p) { c.weighting = parse_weighting(v, p); });
  optional_field(j, "model", "", [&](const json& v, const std::string& p) { c.model = parse_model(v, p); });
  optional_field(j, "solver", "", [&](const json& v, const std::string& p) { c.solver = parse_solver(v, p); });
  optional_field(j, "learning", "", [&](const json& v, const std::string& p) { c.learning = parse_learning(v, p); });
  optional_field(j, "eval", "", [&](const json& v, const std::string& p) { c.eval = parse_eval(v, p); });
  optional_field(j, "bound", "", [&](const json& v, const std::string& p) { c.bound = parse_bound(v, p); });
  optional_field(j, "output", "", [&](const json& v, const std::string& p) { c.output = parse_output(v, p); });

  const std::size_t resolutions =
      c.quantizer.kind == QuantizerConfig::Kind::kUniform ? c.quantizer.cells.size() : c.quantizer.levels.size();
  if (c.model.path && resolutions != 1)
    throw ConfigError("model.path", "a saved model fixes the resolution; list exactly one");
  if (c.quantizer.kind == QuantizerConfig::Kind::kOverflow && c.environment.name != "additive-noise")
    throw ConfigError("quantizer.kind", "overflow quantizers need a non-compact environment (additive-noise)");
  if (c.quantizer.kind == QuantizerConfig::Kind::kOverflow && c.environment.clamp_radius)
    throw ConfigError("quantizer.kind", "the clamped additive-noise variant is compact; use kind 'uniform'");
  return c;
}

Config load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot open '" + path + "'");
  json j;
  try {
    j = json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError("--config", std::string("malformed JSON: ") + e.what());
  }
  return parse_config(j);
}

json experiment_defaults(const std::string& name) {
  if (name == "fisheries") {
    json m = json::array();
    for (int k = 10; k <= 200; k += 10) m.push_back(k);
    return {
        {"environment", {{"name", "fisheries"}, {"params", json::object()}}},
        {"beta", 0.5},
        {"quantizer", {{"kind", "uniform"}, {"M", m}}},
        {"action_net", {{"points", 70}}},
        {"weighting", {{"kind", "uniform"}}},
        {"model", {{"outer_samples", 1000}, {"inner_samples", 10}}},
        {"learning", {{"steps_per_state_action", 2000}, {"episode_length", 100}, {"seeds", {1, 2, 3, 4, 5}}}},
        {"eval", {{"x0", {1.5}}, {"n_rollouts", 1000}}},
        {"output", {{"dir", "out/fisheries"}}},
    };
  }
  if (name == "additive-noise") {
    return {
        {"environment", {{"name", "additive-noise"}, {"params", {{"action_bound", 0.5}, {"sigma", 0.1}}}}},
        {"beta", 0.3},
        {"quantizer",
         {{"kind", "overflow"},
          {"schedule",
           {{"first", 1},
            {"last", 24},
            {"base", 0.5},
            {"step", 0.25},
            {"bin_lengths", {{{"through", 12}, {"length", 0.1}}, {{"through", 24}, {"length", 0.05}}}}}}}},
        {"action_net", {{"bin_length", 0.02}}},
        {"weighting", {{"kind", "uniform"}}},
        {"model", {{"outer_samples", 1000}, {"inner_samples", 10}}},
        {"learning", {{"steps_per_state_action", 2000}, {"episode_length", 20}, {"seeds", {1, 2, 3, 4, 5}}}},
        {"eval", {{"x0", {0.7}}, {"horizon", 20}, {"n_rollouts", 1000}}},
        {"output", {{"dir", "out/additive-noise"}}},
    };
  }
  throw ConfigError("experiment", "unknown experiment '" + name + "' (expected fisheries or additive-noise)");
}

EnvironmentPtr build_environment(const EnvironmentConfig& c) {
  if (c.name == "fisheries") return make_ricker_env(c.ricker);
  if (c.name == "additive-noise") {
    AdditiveNoiseOptions opts;
    opts.truncation_radius = c.truncation_radius;
    opts.clamp_radius = c.clamp_radius;
    if (c.clamp_radius) opts.drift_lipschitz = std::abs(c.drift_x);
    const double fx = c.drift_x, fa = c.drift_a;
    return make_additive_noise_env(c.action_bound, c.sigma, [fx, fa](double x, double a) { return fx * x + fa * a; },
                                   opts);
  }
  if (c.name == "finite-chain") return make_finite_chain_env(c.transitions, c.costs);
  throw ConfigError("environment.name", "unknown environment '" + c.name + "'");
}

}  // namespace quantq
