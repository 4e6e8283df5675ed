#include "quantq/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace quantq {

namespace {

double require(const std::optional<double>& v, const char* name, const char* bound) {
  if (!v) throw std::invalid_argument(std::string(bound) + ": missing input " + name);
  if (std::isnan(*v) || *v < 0.0)
    throw std::invalid_argument(std::string(bound) + ": input " + name + " must be non-negative");
  return *v;
}

void check_beta(double beta, const char* bound) {
  if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument(std::string(bound) + ": beta must lie in (0, 1)");
}

void check_contraction(double beta, double alpha_t, const char* bound) {
  if (!(beta * alpha_t < 1.0))
    throw std::invalid_argument(std::string(bound) + ": beta * alpha_T = " + std::to_string(beta * alpha_t) +
                                " >= 1, so the optimal value function is not known to be Lipschitz");
}

// sum_{t<=T} beta^t l_t + beta^{T+1} / (1 - beta) * l_max
double discounted_series(const BoundInputs& in, const char* bound, BoundResult& r) {
  const auto& s = in.expected_loss_series;
  if (s.empty()) throw std::invalid_argument(std::string(bound) + ": expected loss series is required");
  double sum = 0.0;
  double w = 1.0;
  double peak = 0.0;
  for (double l : s) {
    if (std::isnan(l) || l < 0.0) throw std::invalid_argument(std::string(bound) + ": loss series entries must be >= 0");
    sum += w * l;
    w *= in.beta;
    peak = std::max(peak, l);
  }
  const double tail_level = in.loss_tail_majorant.value_or(peak);
  if (std::isnan(tail_level) || tail_level < 0.0)
    throw std::invalid_argument(std::string(bound) + ": tail majorant must be >= 0");
  const double tail = tail_level > 0.0 ? w / (1.0 - in.beta) * tail_level : 0.0;
  r.inputs.emplace_back("series_length", static_cast<double>(s.size()));
  r.inputs.emplace_back("series_tail_majorant", tail_level);
  r.inputs.emplace_back("series_tail", tail);
  if (!in.series_certified) r.flags.push_back("loss series is a rollout surrogate, not a certificate");
  return sum + tail;
}

}  // namespace

double tv_coefficient(const BoundInputs& in) {
  const double ac = require(in.alpha_c, "alpha_c", "tv bound");
  const double at = require(in.alpha_t, "alpha_T", "tv bound");
  const double cs = require(in.c_sup, "c_sup", "tv bound");
  return ac + in.beta * at * cs / (1.0 - in.beta);
}

BoundResult tv_value_bound(const BoundInputs& in) {
  check_beta(in.beta, "tv_value_bound");
  BoundResult r;
  r.tag = "tv-value";
  const double coef = tv_coefficient(in);
  r.inputs = {{"alpha_c", *in.alpha_c}, {"alpha_T", *in.alpha_t}, {"beta", in.beta}, {"c_sup", *in.c_sup}};
  r.value = coef * discounted_series(in, "tv_value_bound", r);
  return r;
}

BoundResult tv_policy_bound(const BoundInputs& in) {
  BoundResult r = tv_value_bound(in);
  r.tag = "tv-policy";
  r.value *= 2.0;
  return r;
}

BoundResult wasserstein_value_bound(const BoundInputs& in) {
  check_beta(in.beta, "wasserstein_value_bound");
  const double ac = require(in.alpha_c, "alpha_c", "wasserstein_value_bound");
  const double at = require(in.alpha_t, "alpha_T", "wasserstein_value_bound");
  const double lb = require(in.l_bar, "L_bar", "wasserstein_value_bound");
  check_contraction(in.beta, at, "wasserstein_value_bound");
  BoundResult r;
  r.tag = "w1-value";
  r.inputs = {{"alpha_c", ac}, {"alpha_T", at}, {"beta", in.beta}, {"L_bar", lb}};
  if (!in.compact_state_space) r.flags.push_back("state space not compact; bound assumes compactness");
  r.value = lb == 0.0 ? 0.0 : ac * lb / ((1.0 - in.beta * at) * (1.0 - in.beta));
  return r;
}

BoundResult wasserstein_policy_bound(const BoundInputs& in) {
  check_beta(in.beta, "wasserstein_policy_bound");
  const double ac = require(in.alpha_c, "alpha_c", "wasserstein_policy_bound");
  const double at = require(in.alpha_t, "alpha_T", "wasserstein_policy_bound");
  const double lb = require(in.l_bar, "L_bar", "wasserstein_policy_bound");
  check_contraction(in.beta, at, "wasserstein_policy_bound");
  BoundResult r;
  r.tag = "w1-policy";
  r.inputs = {{"alpha_c", ac}, {"alpha_T", at}, {"beta", in.beta}, {"L_bar", lb}};
  if (!in.compact_state_space) r.flags.push_back("state space not compact; bound assumes compactness");
  const double b = in.beta;
  r.value = lb == 0.0 ? 0.0 : 2.0 * ac * lb / ((1.0 - b) * (1.0 - b) * (1.0 - b * at));
  return r;
}

std::pair<BoundResult, BoundResult> dimensional_bounds(const BoundInputs& in) {
  check_beta(in.beta, "dimensional_bounds");
  if (!in.m || *in.m < 1) throw std::invalid_argument("dimensional_bounds: M >= 1 is required");
  if (!in.d || *in.d < 1) throw std::invalid_argument("dimensional_bounds: d >= 1 is required");
  if (!in.alpha_cover || !(*in.alpha_cover > 0.0))
    throw std::invalid_argument("dimensional_bounds: alpha_cover > 0 is required");
  const double ac = require(in.alpha_c, "alpha_c", "dimensional_bounds");
  const double at = require(in.alpha_t, "alpha_T", "dimensional_bounds");
  check_contraction(in.beta, at, "dimensional_bounds");
  const double b = in.beta;
  const double radius = *in.alpha_cover * std::pow(1.0 / static_cast<double>(*in.m), 1.0 / static_cast<double>(*in.d));

  std::vector<std::pair<std::string, double>> echo = {{"alpha_c", ac},
                                                      {"alpha_T", at},
                                                      {"beta", b},
                                                      {"M", static_cast<double>(*in.m)},
                                                      {"d", static_cast<double>(*in.d)},
                                                      {"alpha_cover", *in.alpha_cover},
                                                      {"covering_radius", radius}};
  BoundResult tv;
  tv.tag = "tv-rate";
  tv.value = tv_coefficient(in) * 4.0 * radius / (1.0 - b);
  tv.inputs = echo;
  tv.inputs.emplace_back("c_sup", *in.c_sup);

  BoundResult w1;
  w1.tag = "w1-rate";
  w1.value = 4.0 * ac * radius / ((1.0 - b) * (1.0 - b) * (1.0 - b * at));
  w1.inputs = std::move(echo);
  if (!in.compact_state_space) {
    tv.flags.push_back("state space not compact; bound assumes compactness");
    w1.flags.push_back("state space not compact; bound assumes compactness");
  }
  return {std::move(tv), std::move(w1)};
}

LipschitzEstimate estimate_lipschitz_constants(const Environment& env, std::size_t n_probe_pairs,
                                               std::size_t n_samples_per_kernel, std::uint64_t seed) {
  if (env.state_space().dim != 1 || env.action_space().dim() != 1)
    throw std::invalid_argument("estimate_lipschitz_constants: only 1-D environments are supported");
  if (n_samples_per_kernel == 0) throw std::invalid_argument("estimate_lipschitz_constants: n_samples must be > 0");
  const Box core = env.state_space().core();
  const Box& actions = env.action_space().box;
  const std::size_t n = n_samples_per_kernel;
  const auto bins = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));

  LipschitzEstimate est;
  Rng rng(seed);
  std::vector<double> a(n), b(n);
  std::vector<double> ha(bins), hb(bins);
  for (std::size_t p = 0; p < n_probe_pairs; ++p) {
    const Point x(rng.uniform(core.lower[0], core.upper[0]));
    const Point y(rng.uniform(core.lower[0], core.upper[0]));
    const Point u(rng.uniform(actions.lower[0], actions.upper[0]));
    const double dx = std::abs(x[0] - y[0]);
    if (dx == 0.0) {
      ++est.pairs_skipped;
      continue;
    }
    ++est.pairs_used;
    est.alpha_c = std::max(est.alpha_c, std::abs(env.cost(x, u) - env.cost(y, u)) / dx);

    for (std::size_t i = 0; i < n; ++i) {
      const Point w = env.sample_noise(rng);
      a[i] = env.transition(x, u, w)[0];
      b[i] = env.transition(y, u, w)[0];
    }
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double w1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) w1 += std::abs(a[i] - b[i]);
    w1 /= static_cast<double>(n);
    est.alpha_t_w1 = std::max(est.alpha_t_w1, w1 / dx);

    const double lo = std::min(a.front(), b.front());
    const double hi = std::max(a.back(), b.back());
    const double width = (hi - lo) / static_cast<double>(bins);
    est.tv_bin_width = width;
    double tv = 0.0;
    if (width > 0.0) {
      std::fill(ha.begin(), ha.end(), 0.0);
      std::fill(hb.begin(), hb.end(), 0.0);
      auto slot = [&](double v) { return std::min(bins - 1, static_cast<std::size_t>((v - lo) / width)); };
      for (std::size_t i = 0; i < n; ++i) {
        ha[slot(a[i])] += 1.0;
        hb[slot(b[i])] += 1.0;
      }
      for (std::size_t k = 0; k < bins; ++k) tv += std::abs(ha[k] - hb[k]);
      tv /= static_cast<double>(n);
    } else if (a.front() != b.front()) {
      tv = 2.0;  // two distinct point masses
    }
    est.alpha_t_tv = std::max(est.alpha_t_tv, tv / dx);
  }
  return est;
}

PolicySampler uniform_random_policy(const ActionNet& net) {
  return [points = net.points()](const Point&, Rng& rng) { return points[rng.index(points.size())]; };
}

LossSeries estimate_expected_loss_series(const Environment& env, const WeightingMeasure& weighting,
                                         const PolicySampler& policy, std::size_t horizon, std::size_t n_rollouts,
                                         std::uint64_t seed, std::function<Point(Rng&)> initial,
                                         std::size_t inner_samples, std::size_t jobs) {
  if (n_rollouts == 0) throw std::invalid_argument("estimate_expected_loss_series: n_rollouts must be > 0");
  const StateQuantizer& q = weighting.quantizer();
  const std::size_t len = horizon + 1;
  std::vector<double> losses(n_rollouts * len);

  parallel_for(n_rollouts, jobs, [&](std::size_t r) {
    Rng rng = Rng::derive(seed, {r});
    Point x = initial ? initial(rng) : env.sample_reset_state(rng);
    for (std::size_t t = 0; t < len; ++t) {
      const std::size_t bin = q.quantize(x);
      double loss;
      if (auto exact = weighting.exact_loss(bin, x)) {
        loss = *exact;
      } else {
        loss = 0.0;
        for (std::size_t i = 0; i < inner_samples; ++i) loss += distance(x, weighting.sample(bin, rng));
        loss /= static_cast<double>(std::max<std::size_t>(inner_samples, 1));
      }
      losses[r * len + t] = loss;
      if (t + 1 < len) x = env.sample_next(x, policy(x, rng), rng);
    }
  });

  LossSeries out;
  out.mean.assign(len, 0.0);
  out.standard_error.assign(len, 0.0);
  const double n = static_cast<double>(n_rollouts);
  for (std::size_t t = 0; t < len; ++t) {
    double s = 0.0, s2 = 0.0;
    for (std::size_t r = 0; r < n_rollouts; ++r) {
      const double v = losses[r * len + t];
      s += v;
      s2 += v * v;
    }
    const double mean = s / n;
    out.mean[t] = mean;
    out.standard_error[t] = n_rollouts > 1 ? std::sqrt(std::max(0.0, (s2 - n * mean * mean) / (n - 1.0)) / n) : 0.0;
  }
  return out;
}

}  // namespace quantq
