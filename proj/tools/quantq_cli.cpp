// Command-line front end: solve, learn, eval, bound, experiment.
#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "quantq/config.hpp"
#include "quantq/experiment.hpp"

namespace {

using nlohmann::json;

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw quantq::ConfigError("--config", "cannot open '" + path + "'");
  try {
    return json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw quantq::ConfigError("--config", std::string("malformed JSON: ") + e.what());
  }
}

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::size_t> jobs;
};

struct ExperimentFlags {
  std::string name;
  std::vector<std::string> patches;
  std::vector<std::size_t> m;
  std::vector<std::size_t> n;
  std::vector<std::uint64_t> seeds;
  std::optional<std::uint64_t> steps_per_pair;
  bool timing = false;
};

quantq::Config finish(json j, const Globals& g) {
  quantq::Config cfg = quantq::parse_config(j);
  if (g.seed) cfg.seed = *g.seed;
  if (g.out) cfg.output.dir = *g.out;
  if (g.jobs) {
    if (*g.jobs == 0) throw quantq::ConfigError("--jobs", "must be at least 1");
    cfg.jobs = *g.jobs;
  }
  return cfg;
}

quantq::Config experiment_config(const Globals& g, const ExperimentFlags& f) {
  json j = quantq::experiment_defaults(f.name);
  if (!g.config.empty()) j.merge_patch(read_json_file(g.config));
  for (const auto& p : f.patches) {
    try {
      j.merge_patch(json::parse(p));
    } catch (const json::parse_error& e) {
      throw quantq::ConfigError("--set", std::string("malformed JSON: ") + e.what());
    }
  }
  quantq::Config cfg = finish(std::move(j), g);
  if (!f.m.empty()) {
    if (cfg.quantizer.kind != quantq::QuantizerConfig::Kind::kUniform)
      throw quantq::ConfigError("--M", "only valid with a uniform quantizer (use --n for schedules)");
    if (std::find(f.m.begin(), f.m.end(), 0u) != f.m.end()) throw quantq::ConfigError("--M", "must be at least 1");
    cfg.quantizer.cells = f.m;
  }
  if (!f.n.empty()) {
    if (cfg.quantizer.kind != quantq::QuantizerConfig::Kind::kOverflow)
      throw quantq::ConfigError("--n", "only valid with an overflow schedule (use --M for uniform grids)");
    std::vector<quantq::OverflowLevel> kept;
    for (std::size_t n : f.n) {
      const auto it = std::find_if(cfg.quantizer.levels.begin(), cfg.quantizer.levels.end(),
                                   [&](const quantq::OverflowLevel& l) { return l.label == n; });
      if (it == cfg.quantizer.levels.end())
        throw quantq::ConfigError("--n", "schedule has no level n=" + std::to_string(n));
      kept.push_back(*it);
    }
    cfg.quantizer.levels = std::move(kept);
  }
  if (!f.seeds.empty()) cfg.learning.seeds = f.seeds;
  if (f.steps_per_pair) cfg.learning.steps_per_state_action = *f.steps_per_pair;
  if (f.timing) cfg.output.timing = true;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantized Q-learning toolkit for continuous-state MDPs"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config, "JSON configuration file");
  app.add_option("--seed", g.seed, "Master seed (overrides the config)");
  app.add_option("--out", g.out, "Output directory (overrides the config)");
  app.add_option("--jobs", g.jobs, "Worker threads (overrides the config)");

  auto* solve = app.add_subcommand("solve", "Build finite models and solve them by value iteration");
  auto* learn = app.add_subcommand("learn", "Run quantized Q-learning for every seed");
  auto* eval = app.add_subcommand("eval", "Monte Carlo evaluation of the solver's (or a saved table's) policy");
  auto* bound = app.add_subcommand("bound", "Compute a-priori error bounds");
  auto* experiment = app.add_subcommand("experiment", "Run a resolution sweep (fisheries | additive-noise)");

  ExperimentFlags ef;
  experiment->add_option("name", ef.name, "fisheries or additive-noise")->required();
  experiment->add_option("--set", ef.patches, "JSON merge patch applied to the configuration");
  experiment->add_option("--M", ef.m, "Grid sizes for a uniform quantizer")->delimiter(',');
  experiment->add_option("--n", ef.n, "Schedule indices for an overflow quantizer")->delimiter(',');
  experiment->add_option("--seeds", ef.seeds, "Learning seeds")->delimiter(',');
  experiment->add_option("--steps-per-pair", ef.steps_per_pair, "Learning steps per state-action pair");
  experiment->add_flag("--timing", ef.timing, "Add a wall-time column to the CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (experiment->parsed()) {
      const quantq::Config cfg = experiment_config(g, ef);
      quantq::cmd_experiment(ef.name, cfg, std::cout, std::cerr);
      return 0;
    }
    if (g.config.empty()) throw quantq::ConfigError("--config", "required for this subcommand");
    const quantq::Config cfg = finish(read_json_file(g.config), g);
    if (solve->parsed()) quantq::cmd_solve(cfg, std::cout, std::cerr);
    if (learn->parsed()) quantq::cmd_learn(cfg, std::cout, std::cerr);
    if (eval->parsed()) quantq::cmd_eval(cfg, std::cout, std::cerr);
    if (bound->parsed()) quantq::cmd_bound(cfg, std::cout, std::cerr);
    return 0;
  } catch (const quantq::ConfigError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
