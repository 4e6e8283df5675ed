#pragma once

#include <iosfwd>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "quantq/finite_model.hpp"
#include "quantq/quantizer.hpp"

namespace quantq {

struct ValueFunction {
  std::vector<double> values;
  double beta = 0.0;
  double residual = 0.0;  // last sup-norm change between successive iterates
  std::size_t iterations = 0;
  std::vector<double> residual_history;
};

/// Row-major M x K table of action values.
struct QFunction {
  std::size_t num_states = 0;
  std::size_t num_actions = 0;
  std::vector<double> values;
  double beta = 0.0;

  double at(std::size_t i, std::size_t u) const { return values[i * num_actions + u]; }
  std::span<const double> row(std::size_t i) const { return {values.data() + i * num_actions, num_actions}; }
  double row_min(std::size_t i) const;
};

struct SolveResult {
  ValueFunction value;
  QFunction q;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double residual) : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// Value iteration v <- min_u [C + beta P v] from v = 0, stopped once
/// ||v_{k+1} - v_k|| <= tol (1 - beta) / (2 beta), which keeps the returned
/// value within tol of the fixed point. The returned value is min_u Q of the
/// returned Q, so the two agree exactly.
SolveResult value_iteration(const FiniteModel& fm, double beta, double tol = 1e-10, std::size_t max_iters = 100000);

/// One application of the Bellman operator; writes min_u into `out` and the
/// full Q table into `q_out` when non-null.
void bellman_update(const FiniteModel& fm, double beta, std::span<const double> v, std::span<double> out,
                    std::span<double> q_out = {});

/// Per-row argmin of q; ties go to the smallest action index.
std::vector<std::size_t> greedy_actions(const QFunction& q);

/// A finite policy extended to the state space: constant on each quantizer cell.
class PiecewisePolicy {
 public:
  PiecewisePolicy(std::vector<std::size_t> actions, std::shared_ptr<const StateQuantizer> quantizer,
                  std::shared_ptr<const ActionNet> net);

  std::size_t action_index(std::size_t bin) const { return actions_[bin]; }
  const std::vector<std::size_t>& actions() const { return actions_; }
  const StateQuantizer& quantizer() const { return *quantizer_; }
  const ActionNet& net() const { return *net_; }

  /// Action of x's cell. Throws DomainError outside the quantized region.
  const Point& operator()(const Point& x) const { return (*net_)[actions_[quantizer_->quantize(x)]]; }

 private:
  std::vector<std::size_t> actions_;
  std::shared_ptr<const StateQuantizer> quantizer_;
  std::shared_ptr<const ActionNet> net_;
};

PiecewisePolicy greedy_policy(const QFunction& q, std::shared_ptr<const StateQuantizer> quantizer,
                              std::shared_ptr<const ActionNet> net);

inline const Point& apply_policy(const PiecewisePolicy& p, const Point& x) { return p(x); }

// CSV writers: one row per cell.
void write_value_csv(std::ostream& os, const ValueFunction& v, const StateQuantizer& q,
                     std::span<const std::size_t> actions);
void write_q_csv(std::ostream& os, const QFunction& qf, const StateQuantizer& q);
void write_policy_csv(std::ostream& os, const PiecewisePolicy& p);

}  // namespace quantq
