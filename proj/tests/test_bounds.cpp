#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <memory>

#include "quantq/bounds.hpp"

using namespace quantq;

namespace {

BoundInputs w1_inputs(double l_bar) {
  BoundInputs in;
  in.alpha_c = 3.0;
  in.alpha_t = 1.0;
  in.beta = 0.5;
  in.l_bar = l_bar;
  return in;
}

BoundInputs tv_inputs(std::vector<double> series) {
  BoundInputs in;
  in.alpha_c = 1.0;
  in.alpha_t = 1.0;
  in.beta = 0.5;
  in.c_sup = 1.0;
  in.expected_loss_series = std::move(series);
  return in;
}

}  // namespace

TEST(WassersteinBounds, HandComputedValues) {
  const auto v = wasserstein_value_bound(w1_inputs(0.1));
  EXPECT_NEAR(v.value, 3.0 * 0.1 / (0.5 * 0.5), 1e-15);
  EXPECT_EQ(v.tag, "w1-value");
  const auto p = wasserstein_policy_bound(w1_inputs(0.1));
  EXPECT_NEAR(p.value, 2.0 * 3.0 * 0.1 / (0.25 * 0.5), 1e-15);
  EXPECT_EQ(p.tag, "w1-policy");
  EXPECT_TRUE(p.flags.empty());
}

TEST(WassersteinBounds, LinearInCellSize) {
  for (double l : {0.7, 0.35, 0.0875}) {
    EXPECT_NEAR(wasserstein_value_bound(w1_inputs(l)).value, 2.0 * wasserstein_value_bound(w1_inputs(l / 2)).value,
                1e-12);
    EXPECT_LE(wasserstein_policy_bound(w1_inputs(l / 2)).value, wasserstein_policy_bound(w1_inputs(l)).value);
  }
  EXPECT_EQ(wasserstein_value_bound(w1_inputs(0.0)).value, 0.0);
}

TEST(WassersteinBounds, RequireContraction) {
  BoundInputs in = w1_inputs(0.1);
  in.alpha_t = 2.0;
  try {
    wasserstein_value_bound(in);
    FAIL() << "expected rejection";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("not known to be Lipschitz"), std::string::npos);
  }
  EXPECT_THROW(wasserstein_policy_bound(in), std::invalid_argument);
}

TEST(WassersteinBounds, MissingOrBadInputs) {
  BoundInputs in = w1_inputs(0.1);
  in.alpha_c.reset();
  EXPECT_THROW(wasserstein_value_bound(in), std::invalid_argument);
  in = w1_inputs(0.1);
  in.beta = 1.0;
  EXPECT_THROW(wasserstein_value_bound(in), std::invalid_argument);
  in = w1_inputs(-0.1);
  EXPECT_THROW(wasserstein_value_bound(in), std::invalid_argument);
}

TEST(WassersteinBounds, NonCompactSpaceIsFlaggedAndUnbounded) {
  BoundInputs in = w1_inputs(std::numeric_limits<double>::infinity());
  in.compact_state_space = false;
  const auto r = wasserstein_value_bound(in);
  EXPECT_TRUE(std::isinf(r.value));
  ASSERT_EQ(r.flags.size(), 1u);
}

TEST(TvBounds, HandComputedValues) {
  // coefficient 1 + 0.5 * 1 * 1 / 0.5 = 2; series 1 + 0.5 + tail 0.25 / 0.5 = 2.
  const auto v = tv_value_bound(tv_inputs({1.0, 1.0}));
  EXPECT_NEAR(tv_coefficient(tv_inputs({})), 2.0, 1e-15);
  EXPECT_NEAR(v.value, 4.0, 1e-15);
  EXPECT_EQ(v.tag, "tv-value");
  EXPECT_NEAR(tv_policy_bound(tv_inputs({1.0, 1.0})).value, 8.0, 1e-15);
  EXPECT_EQ(tv_policy_bound(tv_inputs({1.0})).tag, "tv-policy");
}

TEST(TvBounds, ConstantSeriesSumsToGeometricLimit) {
  for (std::size_t len : {1u, 5u, 40u}) {
    const auto v = tv_value_bound(tv_inputs(std::vector<double>(len, 0.3)));
    EXPECT_NEAR(v.value, 2.0 * 0.3 / 0.5, 1e-12) << len;
  }
}

TEST(TvBounds, TailMajorantAndCertification) {
  BoundInputs in = tv_inputs({1.0, 0.0});
  in.loss_tail_majorant = 0.0;
  EXPECT_NEAR(tv_value_bound(in).value, 2.0, 1e-15);
  EXPECT_EQ(tv_value_bound(in).flags.size(), 1u);
  in.series_certified = true;
  EXPECT_TRUE(tv_value_bound(in).flags.empty());
  EXPECT_THROW(tv_value_bound(tv_inputs({})), std::invalid_argument);
  EXPECT_THROW(tv_value_bound(tv_inputs({-1.0})), std::invalid_argument);
  BoundInputs no_c = tv_inputs({1.0});
  no_c.c_sup.reset();
  EXPECT_THROW(tv_value_bound(no_c), std::invalid_argument);
}

TEST(DimensionalBounds, HandComputedValues) {
  BoundInputs in;
  in.alpha_c = 1.0;
  in.alpha_t = 0.5;
  in.beta = 0.5;
  in.c_sup = 1.0;
  in.m = 10;
  in.d = 1;
  in.alpha_cover = uniform_grid_alpha_cover(0.0, 7.0);
  const auto [tv, w1] = dimensional_bounds(in);
  EXPECT_EQ(tv.tag, "tv-rate");
  EXPECT_EQ(w1.tag, "w1-rate");
  EXPECT_NEAR(tv.value, 1.5 * 4.0 * 0.35 / 0.5, 1e-12);
  EXPECT_NEAR(w1.value, 4.0 * 0.35 / (0.25 * 0.75), 1e-12);
  in.m = 20;
  EXPECT_NEAR(dimensional_bounds(in).second.value, w1.value / 2.0, 1e-12);
  in.d = 2;
  in.m = 400;
  EXPECT_NEAR(dimensional_bounds(in).second.value, w1.value / 2.0, 1e-12);
  in.m.reset();
  EXPECT_THROW(dimensional_bounds(in), std::invalid_argument);
}

TEST(DimensionalBounds, CoveringRadiusDominatesTheGrid) {
  // Every point of [a, b] lies within (b - a) / (2M) of a cell midpoint.
  const double a = 0.0, b = 7.0;
  for (std::size_t m : {1u, 7u, 50u}) {
    const auto q = build_uniform_quantizer(a, b, m);
    const double r = uniform_grid_alpha_cover(a, b) / static_cast<double>(m);
    Rng rng(m);
    for (int i = 0; i < 1000; ++i) {
      const Point x(rng.uniform(a, b));
      ASSERT_LE(distance(x, q.representative(q.quantize(x))), r + 1e-12);
    }
  }
}

TEST(LipschitzEstimates, ClampedAdditiveNoiseModel) {
  AdditiveNoiseOptions opts;
  opts.clamp_radius = 1.0;
  opts.drift_lipschitz = 1.0;
  const auto env = make_additive_noise_env(0.5, 0.1, [](double x, double a) { return x + a; }, opts);
  const auto est = estimate_lipschitz_constants(*env, 200, 2000, 3);
  EXPECT_EQ(est.pairs_used + est.pairs_skipped, 200u);
  // Probes can only under-estimate the declared constants.
  EXPECT_LE(est.alpha_c, 3.0 + 1e-12);
  EXPECT_GT(est.alpha_c, 2.0);
  EXPECT_LE(est.alpha_t_w1, 1.0 + 1e-12);
  EXPECT_GT(est.alpha_t_w1, 0.9);
  EXPECT_GT(est.alpha_t_tv, 0.0);
  EXPECT_GT(est.tv_bin_width, 0.0);
}

TEST(LipschitzEstimates, Deterministic) {
  const auto env = make_ricker_env();
  const auto a = estimate_lipschitz_constants(*env, 20, 500, 1);
  const auto b = estimate_lipschitz_constants(*env, 20, 500, 1);
  EXPECT_EQ(a.alpha_c, b.alpha_c);
  EXPECT_EQ(a.alpha_t_w1, b.alpha_t_w1);
  EXPECT_EQ(a.alpha_t_tv, b.alpha_t_tv);
  EXPECT_THROW(estimate_lipschitz_constants(*env, 20, 0, 1), std::invalid_argument);
}

TEST(LossSeries, UniformStartHasMeanThirdOfTheCell) {
  const auto env = make_ricker_env();
  auto q = std::make_shared<const StateQuantizer>(build_uniform_quantizer(0.0, 7.0, 7));
  const auto w = WeightingMeasure::uniform(q);
  const auto net = build_action_net_count(Box::interval(0.0, 7.0), 7);
  const auto s = estimate_expected_loss_series(*env, w, uniform_random_policy(net), 10, 4000, 5);
  ASSERT_EQ(s.mean.size(), 11u);
  EXPECT_NEAR(s.mean[0], 1.0 / 3.0, 4 * s.standard_error[0]);
  for (double l : s.mean) {
    EXPECT_GE(l, 0.25);  // E|x - U| >= h / 4 for any x in a cell of width h
    EXPECT_LE(l, 0.5);
  }
}

TEST(LossSeries, IndependentOfJobCount) {
  const auto env = make_ricker_env();
  auto q = std::make_shared<const StateQuantizer>(build_uniform_quantizer(0.0, 7.0, 10));
  const auto w = WeightingMeasure::uniform(q);
  const auto net = build_action_net_count(Box::interval(0.0, 7.0), 5);
  const auto a = estimate_expected_loss_series(*env, w, uniform_random_policy(net), 5, 200, 9, {}, 32, 1);
  const auto b = estimate_expected_loss_series(*env, w, uniform_random_policy(net), 5, 200, 9, {}, 32, 3);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.standard_error, b.standard_error);
}

TEST(TvBounds, ConstantLossExample) {
  BoundInputs in = tv_inputs(std::vector<double>(30, 0.05));
  EXPECT_NEAR(tv_policy_bound(in).value, 0.4, 1e-12);
  EXPECT_NEAR(tv_value_bound(in).value, 0.2, 1e-12);
  EXPECT_EQ(tv_value_bound(tv_inputs({0.0, 0.0, 0.0})).value, 0.0);
}

TEST(WassersteinBounds, SubstitutionExamples) {
  BoundInputs in;
  in.alpha_c = 1.0;
  in.alpha_t = 0.5;
  in.beta = 0.5;
  in.l_bar = 0.1;
  EXPECT_NEAR(wasserstein_policy_bound(in).value, 16.0 / 15.0, 1e-12);
  EXPECT_NEAR(wasserstein_value_bound(in).value, 0.1 / (0.75 * 0.5), 1e-12);
}

TEST(DimensionalBounds, SubstitutionAndQuartering) {
  BoundInputs in;
  in.alpha_c = 1.0;
  in.alpha_t = 0.5;
  in.beta = 0.5;
  in.c_sup = 1.0;
  in.m = 100;
  in.d = 1;
  in.alpha_cover = uniform_grid_alpha_cover(0.0, 7.0);
  EXPECT_EQ(*in.alpha_cover, 3.5);
  const auto [tv, w1] = dimensional_bounds(in);
  EXPECT_NEAR(w1.value, 4.0 * 3.5 * 0.01 / (0.25 * 0.75), 1e-12);
  in.m = 400;
  const auto [tv4, w14] = dimensional_bounds(in);
  EXPECT_NEAR(tv4.value, tv.value / 4.0, 1e-12);
  EXPECT_NEAR(w14.value, w1.value / 4.0, 1e-12);
}

TEST(AllBounds, NonNegativeAndMonotoneUnderPerturbation) {
  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    BoundInputs in;
    in.beta = 0.05 + 0.9 * u(gen);
    in.alpha_c = 3.0 * u(gen);
    in.alpha_t = 0.99 * u(gen) / in.beta;
    in.c_sup = 2.0 * u(gen);
    in.l_bar = u(gen);
    in.expected_loss_series = {u(gen), u(gen), u(gen)};
    auto all = [](const BoundInputs& b) {
      return std::vector<double>{tv_value_bound(b).value, tv_policy_bound(b).value, wasserstein_value_bound(b).value,
                                 wasserstein_policy_bound(b).value};
    };
    const auto base = all(in);
    for (double v : base) ASSERT_GE(v, 0.0);
    std::vector<BoundInputs> bumped(4, in);
    *bumped[0].l_bar += 0.01;
    bumped[1].expected_loss_series[1] += 0.01;
    *bumped[2].alpha_c += 0.01;
    *bumped[3].alpha_t *= 1.0 - 1e-3;  // keep beta alpha_T < 1 by perturbing downward
    for (int k = 0; k < 3; ++k) {
      const auto up = all(bumped[k]);
      for (std::size_t i = 0; i < 4; ++i) ASSERT_GE(up[i], base[i] - 1e-15) << trial << " " << k << " " << i;
    }
    const auto down = all(bumped[3]);
    for (std::size_t i = 0; i < 4; ++i) ASSERT_LE(down[i], base[i] + 1e-15);
  }
}

TEST(LipschitzEstimates, ShiftedGaussianKernelHasUnitW1Constant) {
  const auto env = make_additive_noise_env(0.5, 0.1, [](double x, double a) { return x + a; });
  const auto est = estimate_lipschitz_constants(*env, 50, 10000, 4);
  EXPECT_NEAR(est.alpha_t_w1, 1.0, 0.05);
  EXPECT_LE(est.alpha_c, 2.0 * (1.0 + 0.5) + 1e-12);
}

TEST(LipschitzEstimates, RejectsMultiDimensionalEnvironments) {
  class Plane final : public Environment {
   public:
    Plane()
        : Environment("plane", StateSpaceDesc::compact(Box{{0.0, 0.0}, {1.0, 1.0}}), ActionSpaceDesc{Box::interval(0.0, 1.0)},
                      Objective::kMinimizeCost, std::nullopt) {}
    double stage_value(const Point&, const Point&) const override { return 0.0; }
    Point sample_noise(Rng&) const override { return Point(0.0); }
    Point transition(const Point& x, const Point&, const Point&) const override { return x; }
  };
  const Plane plane;
  EXPECT_THROW(estimate_lipschitz_constants(plane, 10, 10, 1), std::invalid_argument);
}

TEST(LossSeries, SingletonBinsHaveZeroLossAndHorizonZeroHasOneEntry) {
  const auto env = make_finite_chain_env({{{0.5, 0.5}}, {{0.5, 0.5}}}, {{0.0}, {1.0}});
  // Chain states sit on cell midpoints; a point-mass weighting makes every cell loss zero.
  auto q = std::make_shared<const StateQuantizer>(build_uniform_quantizer(-0.5, 1.5, 2));
  const std::vector<Point> visited{Point(0.0), Point(1.0)};
  const auto w = WeightingMeasure::empirical(q, visited);
  const auto net = build_action_net_count(Box::interval(-0.5, 0.5), 1);
  const auto s = estimate_expected_loss_series(*env, w, uniform_random_policy(net), 6, 50, 1);
  for (double l : s.mean) EXPECT_EQ(l, 0.0);
  EXPECT_EQ(estimate_expected_loss_series(*env, w, uniform_random_policy(net), 0, 5, 1).mean.size(), 1u);
}

TEST(LossSeries, AbsorbingRepresentativeGivesQuarterCell) {
  // Every state is sent to 0.5, the midpoint of the width-1 cell [0, 1).
  class Absorb final : public Environment {
   public:
    Absorb()
        : Environment("absorb", StateSpaceDesc::compact(Box::interval(0.0, 4.0)), ActionSpaceDesc{Box::interval(0.0, 1.0)},
                      Objective::kMinimizeCost, std::nullopt) {}
    double stage_value(const Point&, const Point&) const override { return 0.0; }
    Point sample_noise(Rng&) const override { return Point(0.0); }
    Point transition(const Point&, const Point&, const Point&) const override { return Point(0.5); }
  };
  const Absorb env;
  auto q = std::make_shared<const StateQuantizer>(build_uniform_quantizer(0.0, 4.0, 4));
  const auto w = WeightingMeasure::uniform(q);
  const auto net = build_action_net_count(Box::interval(0.0, 1.0), 1);
  const auto s = estimate_expected_loss_series(env, w, uniform_random_policy(net), 3, 100, 2, {}, 0);
  EXPECT_NEAR(s.mean.back(), 0.25, 1e-15);
  // The same limit through the Monte Carlo path of the estimator.
  const auto mc = estimate_loss(*q, Point(0.5), [&](Rng& r) { return w.sample(0, r); }, 100000, 3);
  EXPECT_NEAR(mc.mean, 0.25, 3 * mc.standard_error);
}
