#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "quantq/core.hpp"
#include "quantq/env.hpp"
#include "quantq/quantizer.hpp"
#include "quantq/solver.hpp"

namespace quantq {

/// Q values with per-pair visit counts.
struct QTable {
  std::size_t num_states = 0;
  std::size_t num_actions = 0;
  std::vector<double> q;
  std::vector<std::uint64_t> visits;
  std::uint64_t steps = 0;

  QTable() = default;
  QTable(std::size_t m, std::size_t k, double q0 = 0.0)
      : num_states(m), num_actions(k), q(m * k, q0), visits(m * k, 0) {}

  double at(std::size_t i, std::size_t u) const { return q[i * num_actions + u]; }
  std::uint64_t visit_count(std::size_t i, std::size_t u) const { return visits[i * num_actions + u]; }
  double row_min(std::size_t i) const;
  QFunction as_q_function(double beta) const;

  friend bool operator==(const QTable&, const QTable&) = default;
};

/// Behaviour policy used to collect data.
class ExplorationPolicy {
 public:
  using Sampler = std::function<std::size_t(const Point& x, Rng& rng)>;

  /// i.i.d. uniform over the action net.
  static ExplorationPolicy uniform(std::size_t num_actions);
  /// User-supplied randomized map from states to action indices. The caller
  /// is responsible for giving every action positive probability.
  static ExplorationPolicy custom(Sampler sampler, std::string label = "custom");

  std::size_t operator()(const Point& x, Rng& rng) const;
  const std::string& label() const { return label_; }
  bool is_uniform() const { return uniform_size_ > 0; }

 private:
  std::size_t uniform_size_ = 0;
  Sampler sampler_;
  std::string label_;
};

/// How the per-pair step size is indexed against the visit counter N(y, u).
enum class StepSizeRule {
  /// alpha = 1 / (1 + N) with N counting earlier visits: sample averaging, first visit alpha = 1.
  kSampleAverage,
  /// N is incremented before use, alpha = 1 / (1 + N): first visit alpha = 1/2.
  kPostIncrement,
};

struct UpdateRecord {
  std::uint64_t t;
  std::size_t bin;
  std::size_t action;
  std::uint64_t prior_visits;
  double alpha;
  double target;
  double q_before;
  double q_after;
};

using UpdateLog = std::function<void(const UpdateRecord&)>;

struct LearningRun {
  std::uint64_t seed = 0;
  double beta = 0.5;
  std::uint64_t total_steps = 0;
  /// Steps per episode; 0 runs a single episode of `total_steps`.
  std::uint64_t episode_length = 0;
  /// Episode start distribution; defaults to the environment's reset sampler.
  std::function<Point(Rng&)> reset;
  StepSizeRule step_size = StepSizeRule::kSampleAverage;
  /// Steps after which a snapshot of Q is kept.
  std::vector<std::uint64_t> checkpoints;
  UpdateLog log;
};

struct Checkpoint {
  std::uint64_t step;
  std::vector<double> q;
};

struct LearningResult {
  QTable table;
  std::vector<Checkpoint> checkpoints;
  std::vector<std::uint64_t> bin_visits;  // visits per quantizer cell
  std::uint64_t episodes = 0;
};

/// Quantized Q-learning along simulated trajectories of the true environment:
///   Q(q(x), u) <- (1 - alpha) Q(q(x), u) + alpha (c(x, u) + beta min_v Q(q(x'), v))
/// Visit counts persist across episodes. Costs are on the minimisation
/// scale, so reward environments are learned as negated rewards.
LearningResult quantized_q_learning(const Environment& env, const StateQuantizer& q, const ActionNet& actions,
                                    const ExplorationPolicy& exploration, const LearningRun& run,
                                    std::optional<QTable> q0 = std::nullopt);

/// Classic tabular Q-learning on a finite chain: the quantized algorithm
/// with one cell per chain state and the chain's own action set.
LearningResult classic_q_learning(const Environment& finite_env, const ExplorationPolicy& exploration,
                                  const LearningRun& run, std::optional<QTable> q0 = std::nullopt);

/// Singleton-cell quantizer and action net matching a finite chain.
StateQuantizer chain_quantizer(std::size_t num_states);
ActionNet chain_action_net(std::size_t num_actions);

struct VisitReport {
  std::vector<std::uint64_t> counts;  // row-major M x K
  std::uint64_t min_count = 0;
  std::vector<std::pair<std::size_t, std::size_t>> below_floor;
  std::vector<std::string> warnings;
};

VisitReport visit_report(const QTable& qt, std::uint64_t floor = 1);

/// Flat text format: magic line, "M K steps", M rows of K Q values, M rows of K visit counts.
void write_qtable(std::ostream& os, const QTable& qt);
QTable read_qtable(std::istream& is);
void write_visit_csv(std::ostream& os, const VisitReport& report, std::size_t num_actions);
/// CSV sink for update audits: t,bin,action,prior_visits,alpha,target.
UpdateLog csv_update_log(std::ostream& os);

}  // namespace quantq
