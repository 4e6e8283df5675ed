#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "quantq/env.hpp"
#include "quantq/finite_model.hpp"
#include "quantq/quantizer.hpp"

namespace quantq {

/// Constants feeding the a-priori error bounds. Fields a given bound does
/// not use may stay empty.
struct BoundInputs {
  std::optional<double> alpha_c;  // Lipschitz constant of the cost in x
  std::optional<double> alpha_t;  // kernel Lipschitz constant (TV or W1, depending on the bound)
  double beta = 0.5;
  std::optional<double> c_sup;    // sup |c|
  std::optional<double> l_bar;
  std::optional<double> l_minus;
  /// Estimates of sup over policies of E[L(X_t)], t = 0..T.
  std::vector<double> expected_loss_series;
  /// Majorant of l_t for t > T; defaults to the series maximum.
  std::optional<double> loss_tail_majorant;
  /// True only when the series is an analytic majorant rather than a rollout surrogate.
  bool series_certified = false;
  std::optional<std::size_t> m;
  std::optional<std::size_t> d;
  std::optional<double> alpha_cover;  // covering radius is alpha_cover * (1/M)^{1/d}
  bool compact_state_space = true;
};

struct BoundResult {
  double value = 0.0;
  std::string tag;
  std::vector<std::pair<std::string, double>> inputs;  // echo of the constants used
  std::vector<std::string> flags;
};

/// Cost-sensitivity term alpha_c + beta alpha_T ||c|| / (1 - beta) shared by the TV bounds.
double tv_coefficient(const BoundInputs& in);

/// Value-function bound under total-variation continuity:
///   (alpha_c + beta alpha_T ||c|| / (1 - beta)) sum_t beta^t l_t
BoundResult tv_value_bound(const BoundInputs& in);
/// Policy bound under total-variation continuity: twice the value bound.
BoundResult tv_policy_bound(const BoundInputs& in);
/// alpha_c L_bar / ((1 - beta alpha_T)(1 - beta)); requires beta alpha_T < 1.
BoundResult wasserstein_value_bound(const BoundInputs& in);
/// 2 alpha_c L_bar / ((1 - beta)^2 (1 - beta alpha_T)); requires beta alpha_T < 1.
BoundResult wasserstein_policy_bound(const BoundInputs& in);
/// Both closed-form rate bounds with covering radius alpha (1/M)^{1/d}:
/// first the TV form, then the Wasserstein form.
std::pair<BoundResult, BoundResult> dimensional_bounds(const BoundInputs& in);

/// Covering constant of an M-cell uniform grid on [a, b]: (b - a) / 2.
inline double uniform_grid_alpha_cover(double a, double b) { return (b - a) / 2.0; }

struct LipschitzEstimate {
  double alpha_c = 0.0;
  double alpha_t_w1 = 0.0;
  double alpha_t_tv = 0.0;  // histogram estimate, biased; approximate only
  double tv_bin_width = 0.0;  // width used by the last histogram
  std::size_t pairs_used = 0;
  std::size_t pairs_skipped = 0;  // x == x' probes
};

/// Probe-based lower estimates of the regularity constants of a 1-D
/// environment. Each probe draws x, x' uniformly on the core and u uniformly
/// on the action box, then compares n_samples next-state draws from both
/// points under common noise. W1 uses sorted samples; TV uses a histogram
/// with ceil(sqrt(n)) bins over the pooled range and the convention
/// ||mu - nu|| = 2 sup_A |mu(A) - nu(A)|.
LipschitzEstimate estimate_lipschitz_constants(const Environment& env, std::size_t n_probe_pairs,
                                               std::size_t n_samples_per_kernel, std::uint64_t seed);

/// Randomized state-feedback policy used to drive loss-series rollouts.
using PolicySampler = std::function<Point(const Point& x, Rng& rng)>;

/// Actions drawn uniformly from the net at every step.
PolicySampler uniform_random_policy(const ActionNet& net);

struct LossSeries {
  std::vector<double> mean;  // l_0..l_T
  std::vector<double> standard_error;
};

/// Monte Carlo estimate of E[L(X_t)] along rollouts of `policy` started
/// from `initial` (default: the environment's reset sampler). L uses the
/// closed form of the weighting when it has one and `inner_samples` draws
/// otherwise. This is a surrogate for the supremum over policies.
LossSeries estimate_expected_loss_series(const Environment& env, const WeightingMeasure& weighting,
                                         const PolicySampler& policy, std::size_t horizon, std::size_t n_rollouts,
                                         std::uint64_t seed, std::function<Point(Rng&)> initial = {},
                                         std::size_t inner_samples = 32, std::size_t jobs = 1);

}  // namespace quantq
