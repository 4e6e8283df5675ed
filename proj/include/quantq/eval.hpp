#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "quantq/env.hpp"
#include "quantq/solver.hpp"

namespace quantq {

/// Deterministic state-feedback policy.
using PolicyFn = std::function<Point(const Point& x)>;

PolicyFn as_policy_fn(const PiecewisePolicy& p);

struct RolloutSpec {
  Point x0;
  /// Rollout length; 0 picks default_horizon(beta, c_sup).
  std::size_t horizon = 0;
  std::size_t n_rollouts = 100;
  double beta = 0.5;
  std::uint64_t seed = 0;
  /// Cost bound for the truncation error; defaults to the environment's declaration.
  std::optional<double> c_sup;
  std::size_t jobs = 1;
  bool keep_returns = false;
};

struct EvalResult {
  Point x0;
  double mean = 0.0;            // discounted cost, minimisation scale
  double standard_error = 0.0;  // sample std / sqrt(n)
  double truncation = 0.0;      // beta^T c_sup / (1 - beta); +inf without a cost bound
  std::size_t n_rollouts = 0;
  std::size_t horizon = 0;
  std::uint64_t seed = 0;
  std::vector<double> returns;
};

/// Smallest T with beta^T c_sup / (1 - beta) <= eps, at least 1.
std::size_t default_horizon(double beta, double c_sup, double eps = 1e-4);

/// Mean of sum_{t<T} beta^t c(X_t, pi(X_t)) over independent rollouts from x0.
/// Rollout r uses the stream derived from (seed, r), so results do not
/// depend on `jobs`. Stage values are checked against the declared bound.
EvalResult rollout_value(const Environment& env, const PolicyFn& policy, const RolloutSpec& spec);
EvalResult rollout_value(const Environment& env, const PiecewisePolicy& policy, const RolloutSpec& spec);

struct GapResult {
  double gap = 0.0;       // |estimate - reference|
  double standard_error = 0.0;  // rollout and reference errors combined in quadrature
  double truncation = 0.0;
  EvalResult estimate;
};

/// Optimality gap against a reference value on the minimisation scale
/// (negate rewards before passing a reward-scale reference).
GapResult optimality_gap(const Environment& env, const PolicyFn& policy, double reference_value,
                         const RolloutSpec& spec, double reference_se = 0.0);

/// CSV with columns x0,estimate,se,truncation,n,T,seed.
void write_eval_csv(std::ostream& os, const std::vector<EvalResult>& rows);

}  // namespace quantq
