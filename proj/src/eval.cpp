#include "quantq/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace quantq {

PolicyFn as_policy_fn(const PiecewisePolicy& p) {
  return [p](const Point& x) { return p(x); };
}

std::size_t default_horizon(double beta, double c_sup, double eps) {
  if (!(beta >= 0.0 && beta < 1.0)) throw std::invalid_argument("default_horizon: beta must lie in [0, 1)");
  if (beta == 0.0 || c_sup <= 0.0) return 1;
  const double t = std::log(eps * (1.0 - beta) / c_sup) / std::log(beta);
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(t)));
}

EvalResult rollout_value(const Environment& env, const PolicyFn& policy, const RolloutSpec& spec) {
  if (!(spec.beta >= 0.0 && spec.beta < 1.0)) throw std::invalid_argument("rollout_value: beta must lie in [0, 1)");
  if (spec.n_rollouts == 0) throw std::invalid_argument("rollout_value: n_rollouts must be > 0");
  std::optional<double> c_sup = spec.c_sup;
  if (!c_sup && env.regularity()) c_sup = env.regularity()->c_sup;
  std::size_t horizon = spec.horizon;
  if (horizon == 0) {
    if (!c_sup) throw std::invalid_argument("rollout_value: horizon 0 needs a cost bound to pick a default");
    horizon = default_horizon(spec.beta, *c_sup);
  }

  EvalResult out;
  out.x0 = spec.x0;
  out.n_rollouts = spec.n_rollouts;
  out.horizon = horizon;
  out.seed = spec.seed;
  out.truncation = c_sup ? std::pow(spec.beta, static_cast<double>(horizon)) * *c_sup / (1.0 - spec.beta)
                         : std::numeric_limits<double>::infinity();

  std::vector<double> returns(spec.n_rollouts);
  parallel_for(spec.n_rollouts, spec.jobs, [&](std::size_t r) {
    Rng rng = Rng::derive(spec.seed, {r});
    Point x = spec.x0;
    double total = 0.0;
    double w = 1.0;
    for (std::size_t t = 0; t < horizon; ++t) {
      const Point u = policy(x);
      const double value = env.stage_value(x, u);
      env.check_bounded(value);
      total += w * (env.objective() == Objective::kMaximizeReward ? -value : value);
      w *= spec.beta;
      if (t + 1 < horizon) x = env.sample_next(x, u, rng);
    }
    returns[r] = total;
  });

  const double n = static_cast<double>(spec.n_rollouts);
  double mean = 0.0;
  for (double v : returns) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : returns) ss += (v - mean) * (v - mean);
  out.mean = mean;
  out.standard_error = spec.n_rollouts > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
  if (spec.keep_returns) out.returns = std::move(returns);
  return out;
}

EvalResult rollout_value(const Environment& env, const PiecewisePolicy& policy, const RolloutSpec& spec) {
  return rollout_value(env, [&policy](const Point& x) { return policy(x); }, spec);
}

GapResult optimality_gap(const Environment& env, const PolicyFn& policy, double reference_value,
                         const RolloutSpec& spec, double reference_se) {
  GapResult g;
  g.estimate = rollout_value(env, policy, spec);
  g.gap = std::abs(g.estimate.mean - reference_value);
  g.standard_error = std::hypot(g.estimate.standard_error, reference_se);
  g.truncation = g.estimate.truncation;
  return g;
}

void write_eval_csv(std::ostream& os, const std::vector<EvalResult>& rows) {
  const auto old = os.precision(17);
  os << "x0,estimate,se,truncation,n,T,seed\n";
  for (const auto& r : rows)
    os << to_string(r.x0) << ',' << r.mean << ',' << r.standard_error << ',' << r.truncation << ',' << r.n_rollouts
       << ',' << r.horizon << ',' << r.seed << '\n';
  os.precision(old);
}

}  // namespace quantq
