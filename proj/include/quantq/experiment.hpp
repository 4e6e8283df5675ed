#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "quantq/config.hpp"
#include "quantq/env.hpp"
#include "quantq/quantizer.hpp"

namespace quantq {

/// One quantizer in a sweep: "M40" for uniform grids, "n7" for overflow schedules.
struct Resolution {
  std::string label;
  double value;  // M or n, used as the sweep axis
  std::shared_ptr<const StateQuantizer> quantizer;
};

std::vector<Resolution> build_resolutions(const Config& cfg, const Environment& env);
std::shared_ptr<const ActionNet> build_actions(const Config& cfg, const Environment& env);

/// Commands write their files under cfg.output.dir, print a short report to
/// `report`, and send progress and timing to `log`. Given the same config,
/// every file they write is byte-identical across runs.
void cmd_solve(const Config& cfg, std::ostream& report, std::ostream& log);
void cmd_learn(const Config& cfg, std::ostream& report, std::ostream& log);
void cmd_eval(const Config& cfg, std::ostream& report, std::ostream& log);
void cmd_bound(const Config& cfg, std::ostream& report, std::ostream& log);

struct ExperimentRow {
  std::string label;
  double resolution = 0.0;
  std::size_t num_states = 0;
  std::size_t num_actions = 0;
  double x0 = 0.0;
  // Values at x0 on the environment's own scale (rewards for fisheries).
  double vi_value = 0.0;
  std::vector<double> learned;
  double learned_mean = 0.0;
  double learned_se = 0.0;
  double gap = 0.0;
  double vi_policy_return = 0.0;
  double vi_policy_se = 0.0;
  double learned_policy_return = 0.0;
  double learned_policy_se = 0.0;
  double wall_time_s = 0.0;
};

struct ExperimentSummary {
  std::vector<ExperimentRow> rows;
  double spearman_rho = 0.0;  // resolution vs gap, first x0
  double spearman_p = 1.0;
};

/// Solve, learn over the seed list, and evaluate at every x0 for each
/// resolution; writes <name>.csv, <name>_summary.csv and <name>.svg.
ExperimentSummary cmd_experiment(const std::string& name, const Config& cfg, std::ostream& report, std::ostream& log);

void write_experiment_csv(std::ostream& os, const std::vector<ExperimentRow>& rows, bool timing);

}  // namespace quantq
