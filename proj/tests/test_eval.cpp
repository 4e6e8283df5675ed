#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <sstream>

#include "oracles.hpp"
#include "quantq/eval.hpp"
#include "quantq/qlearn.hpp"

using namespace quantq;

TEST(DefaultHorizon, SmallestSufficientLength) {
  const std::size_t t = default_horizon(0.5, 2.0, 1e-4);
  EXPECT_LE(std::pow(0.5, static_cast<double>(t)) * 2.0 / 0.5, 1e-4);
  EXPECT_GT(std::pow(0.5, static_cast<double>(t - 1)) * 2.0 / 0.5, 1e-4);
  EXPECT_EQ(default_horizon(0.0, 2.0), 1u);
  EXPECT_EQ(default_horizon(0.5, 0.0), 1u);
}

TEST(Rollout, SingleStateChainIsExactUpToTruncation) {
  const auto env = make_finite_chain_env({{{1.0}}}, {{1.0}});
  RolloutSpec spec;
  spec.x0 = Point(0.0);
  spec.beta = 0.5;
  spec.n_rollouts = 10;
  const EvalResult r = rollout_value(*env, [](const Point&) { return Point(0.0); }, spec);
  EXPECT_NEAR(r.mean, 2.0, r.truncation + 1e-12);
  EXPECT_LE(r.truncation, 1e-4);
  EXPECT_EQ(r.standard_error, 0.0);
  EXPECT_EQ(r.horizon, default_horizon(0.5, 1.0));
}

TEST(Rollout, MatchesTheLinearSolveOnARandomChain) {
  std::mt19937_64 gen(21);
  const auto c = oracle::random_chain(gen, 4, 2);
  const std::vector<std::size_t> policy{1, 0, 0, 1};
  const auto j = oracle::evaluate_policy(c, policy, 0.6);
  const auto env = make_finite_chain_env(c.p, c.c);
  RolloutSpec spec;
  spec.beta = 0.6;
  spec.n_rollouts = 20000;
  spec.seed = 4;
  for (std::size_t s = 0; s < 4; ++s) {
    spec.x0 = Point(static_cast<double>(s));
    const EvalResult r =
        rollout_value(*env, [&](const Point& x) { return Point(static_cast<double>(policy[static_cast<std::size_t>(x[0])])); }, spec);
    EXPECT_NEAR(r.mean, j[s], 4 * r.standard_error + r.truncation) << s;
  }
}

TEST(Rollout, ReproducibleAndIndependentOfJobs) {
  const auto env = make_ricker_env();
  auto q = std::make_shared<const StateQuantizer>(build_uniform_quantizer(0.0, 7.0, 10));
  auto net = std::make_shared<const ActionNet>(build_action_net_count(Box::interval(0.0, 7.0), 7));
  const PiecewisePolicy p(std::vector<std::size_t>(10, 3), q, net);
  RolloutSpec spec;
  spec.x0 = Point(1.5);
  spec.n_rollouts = 300;
  spec.seed = 8;
  spec.keep_returns = true;
  const EvalResult a = rollout_value(*env, p, spec);
  spec.jobs = 4;
  const EvalResult b = rollout_value(*env, p, spec);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.returns, b.returns);
  EXPECT_EQ(a.returns.size(), 300u);
  spec.seed = 9;
  EXPECT_NE(rollout_value(*env, p, spec).mean, a.mean);
  // Rewards are reported on the minimisation scale.
  EXPECT_LT(a.mean, 0.0);
}

TEST(Rollout, NonCompactEnvironmentNeedsAHorizonOrBound) {
  const auto env = make_additive_noise_env(0.5, 0.1, [](double x, double a) { return x + a; });
  RolloutSpec spec;
  spec.x0 = Point(0.7);
  EXPECT_THROW(rollout_value(*env, [](const Point&) { return Point(0.0); }, spec), std::invalid_argument);
  spec.horizon = 20;
  const EvalResult r = rollout_value(*env, [](const Point&) { return Point(0.0); }, spec);
  EXPECT_TRUE(std::isinf(r.truncation));
  EXPECT_GT(r.mean, 0.0);
}

TEST(OptimalityGap, CombinesErrors) {
  const auto env = make_finite_chain_env({{{1.0}}}, {{1.0}});
  RolloutSpec spec;
  spec.x0 = Point(0.0);
  spec.n_rollouts = 5;
  const GapResult g = optimality_gap(*env, [](const Point&) { return Point(0.0); }, 1.5, spec, 0.3);
  EXPECT_NEAR(g.gap, 0.5, 1e-3);
  EXPECT_NEAR(g.standard_error, 0.3, 1e-12);
}

TEST(EvalCsv, Columns) {
  EvalResult r;
  r.x0 = Point(1.5);
  r.mean = -1.25;
  r.standard_error = 0.5;
  r.truncation = 0.001;
  r.n_rollouts = 10;
  r.horizon = 20;
  r.seed = 3;
  std::ostringstream os;
  write_eval_csv(os, {r});
  EXPECT_EQ(os.str(), "x0,estimate,se,truncation,n,T,seed\n1.5,-1.25,0.5,0.001,10,20,3\n");
}

namespace {

oracle::Chain two_state() {
  oracle::Chain c;
  c.p = {{{0.9, 0.1}, {0.1, 0.9}}, {{0.9, 0.1}, {0.1, 0.9}}};
  c.c = {{1.0, 2.0}, {2.0, 1.0}};
  return c;
}

PolicyFn table_policy(std::vector<std::size_t> actions) {
  return [actions](const Point& x) { return Point(static_cast<double>(actions[static_cast<std::size_t>(x[0])])); };
}

}  // namespace

TEST(Rollout, GeometricSeriesWithFixedHorizon) {
  const auto env = make_finite_chain_env({{{1.0}}}, {{1.0}});
  RolloutSpec spec;
  spec.x0 = Point(0.0);
  spec.horizon = 20;
  spec.n_rollouts = 1;
  const EvalResult r = rollout_value(*env, [](const Point&) { return Point(0.0); }, spec);
  EXPECT_NEAR(r.mean, 2.0 - 2.0 * std::pow(0.5, 20), 1e-15);
  EXPECT_NEAR(r.truncation, std::pow(0.5, 20) * 1.0 / 0.5, 1e-18);
  const EvalResult again = rollout_value(*env, [](const Point&) { return Point(0.0); }, spec);
  EXPECT_EQ(r.mean, again.mean);
}

TEST(Rollout, TwoStateOptimalPolicyMatchesLinearSolve) {
  const auto c = two_state();
  const auto opt = oracle::enumerate_policies(c, 0.5);
  const auto env = make_finite_chain_env(c.p, c.c);
  RolloutSpec spec;
  spec.n_rollouts = 5000;
  spec.seed = 12;
  for (std::size_t s = 0; s < 2; ++s) {
    spec.x0 = Point(static_cast<double>(s));
    const EvalResult r = rollout_value(*env, table_policy(opt.policy), spec);
    EXPECT_NEAR(r.mean, opt.j[s], 3 * r.standard_error + r.truncation);
    const GapResult self = optimality_gap(*env, table_policy(opt.policy), opt.j[s], spec);
    EXPECT_LE(self.gap, 3 * self.standard_error + self.truncation);
  }
}

TEST(OptimalityGap, AntiGreedyPolicyIsVisiblyWorse) {
  const auto c = two_state();
  const auto opt = oracle::enumerate_policies(c, 0.5);
  const std::vector<std::size_t> anti{1 - opt.policy[0], 1 - opt.policy[1]};
  const auto j_anti = oracle::evaluate_policy(c, anti, 0.5);
  const double known = j_anti[0] - opt.j[0];
  ASSERT_GT(known, 0.5);
  const auto env = make_finite_chain_env(c.p, c.c);
  RolloutSpec spec;
  spec.x0 = Point(0.0);
  spec.n_rollouts = 5000;
  const GapResult g = optimality_gap(*env, table_policy(anti), opt.j[0], spec);
  EXPECT_GE(g.gap, known - 3 * g.standard_error - g.truncation - 1e-12);
  EXPECT_GT(g.gap, 0.5);
}
