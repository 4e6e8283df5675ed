#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "quantq/env.hpp"
#include "quantq/finite_model.hpp"
#include "quantq/qlearn.hpp"
#include "quantq/quantizer.hpp"

namespace quantq {

/// Schema violation; the message names the offending field path.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& path, const std::string& problem)
      : std::runtime_error("config error at '" + path + "': " + problem), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct EnvironmentConfig {
  std::string name;  // fisheries | additive-noise | finite-chain
  RickerParams ricker;
  double action_bound = 0.5;
  double sigma = 0.1;
  double drift_x = 1.0;  // F(x, a) = drift_x * x + drift_a * a
  double drift_a = 1.0;
  double truncation_radius = 1.0;
  std::optional<double> clamp_radius;
  std::vector<std::vector<std::vector<double>>> transitions;
  std::vector<std::vector<double>> costs;
};

struct OverflowLevel {
  std::size_t label;  // schedule index n
  double radius;
  double bin_length;
};

struct QuantizerConfig {
  enum class Kind { kUniform, kOverflow };
  Kind kind = Kind::kUniform;
  std::optional<double> lower;  // defaults to the core of the state space
  std::optional<double> upper;
  std::vector<std::size_t> cells;
  std::vector<OverflowLevel> levels;
};

struct ActionNetConfig {
  std::optional<std::size_t> points;
  std::optional<double> bin_length;
};

struct WeightingConfig {
  WeightingMeasure::Kind kind = WeightingMeasure::Kind::kUniformOnBin;
  std::uint64_t trajectory_steps = 100000;  // empirical kind only
};

struct ModelConfig {
  std::size_t outer_samples = 1000;
  std::size_t inner_samples = 10;
  std::optional<std::string> path;
};

struct SolverConfig {
  double tol = 1e-10;
  std::size_t max_iters = 100000;
};

struct LearningConfig {
  std::uint64_t steps_per_state_action = 2000;
  std::optional<std::uint64_t> total_steps;
  std::uint64_t episode_length = 100;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  StepSizeRule step_size = StepSizeRule::kSampleAverage;
  double q0 = 0.0;
  std::vector<std::uint64_t> checkpoints;
  std::uint64_t visit_floor = 1;
  bool log_updates = false;
};

struct EvalConfig {
  std::vector<double> x0;
  std::size_t horizon = 0;  // 0: chosen from truncation_eps
  std::size_t n_rollouts = 1000;
  double truncation_eps = 1e-4;
  std::optional<std::string> qtable;  // evaluate this table's greedy policy instead of the solver's
};

struct LossSeriesConfig {
  std::size_t horizon = 20;
  std::size_t n_rollouts = 500;
};

struct BoundConfig {
  std::vector<std::string> kinds{"w1-policy", "w1-value"};
  std::optional<double> alpha_c;
  std::optional<double> alpha_t;
  std::optional<double> c_sup;
  std::optional<double> alpha_cover;
  std::vector<double> loss_values;  // analytic majorant; certified when given
  std::optional<double> tail_majorant;
  LossSeriesConfig loss_series;
  std::size_t probe_pairs = 200;
  std::size_t probe_samples = 10000;
};

struct OutputConfig {
  std::string dir = "out";
  bool plot = true;
  bool timing = false;  // adds a wall-time column; breaks byte-identical reruns
};

struct Config {
  EnvironmentConfig environment;
  double beta = 0.5;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  QuantizerConfig quantizer;
  ActionNetConfig action_net;
  WeightingConfig weighting;
  ModelConfig model;
  SolverConfig solver;
  LearningConfig learning;
  EvalConfig eval;
  BoundConfig bound;
  OutputConfig output;
};

/// Strict parse: unknown keys, wrong types, and out-of-range values raise ConfigError.
Config parse_config(const nlohmann::json& j);
Config load_config_file(const std::string& path);

/// Built-in experiment settings ("fisheries" or "additive-noise") as JSON.
nlohmann::json experiment_defaults(const std::string& name);

EnvironmentPtr build_environment(const EnvironmentConfig& c);

}  // namespace quantq
