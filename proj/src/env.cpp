#include "quantq/env.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace quantq {

StateSpaceDesc StateSpaceDesc::compact(Box b) {
  StateSpaceDesc d;
  d.kind = Kind::kCompactBox;
  d.dim = b.dim();
  d.box = std::move(b);
  d.validate();
  return d;
}

StateSpaceDesc StateSpaceDesc::euclidean(std::size_t dim, double truncation_radius) {
  StateSpaceDesc d;
  d.kind = Kind::kEuclideanWithOverflow;
  d.dim = dim;
  d.truncation_radius = truncation_radius;
  d.validate();
  return d;
}

bool StateSpaceDesc::contains(const Point& x) const {
  if (x.size() != dim) return false;
  if (kind == Kind::kCompactBox) return box.contains(x);
  for (double v : x.values())
    if (!std::isfinite(v)) return false;
  return true;
}

Box StateSpaceDesc::core() const {
  if (kind == Kind::kCompactBox) return box;
  return Box{std::vector<double>(dim, -truncation_radius), std::vector<double>(dim, truncation_radius)};
}

void StateSpaceDesc::validate() const {
  if (dim == 0 || dim > kMaxDim) throw std::invalid_argument("StateSpaceDesc: bad dimension");
  if (kind == Kind::kCompactBox) {
    box.validate(/*strict=*/true);
    if (box.dim() != dim) throw std::invalid_argument("StateSpaceDesc: box dimension mismatch");
  } else if (!(truncation_radius > 0.0) || !std::isfinite(truncation_radius)) {
    throw std::invalid_argument("StateSpaceDesc: truncation radius must be positive");
  }
}

std::string to_string(RegularityClass c) {
  switch (c) {
    case RegularityClass::kWeak: return "weak";
    case RegularityClass::kWasserstein: return "wasserstein";
    case RegularityClass::kTotalVariation: return "total-variation";
  }
  return "unknown";
}

void RegularityDecl::validate() const {
  auto nonneg = [](std::optional<double> v) { return !v || (*v >= 0.0 && std::isfinite(*v)); };
  if (!nonneg(alpha_c) || !nonneg(alpha_t) || !(c_sup >= 0.0))
    throw std::invalid_argument("RegularityDecl: constants must be non-negative");
}

Environment::Environment(std::string name, StateSpaceDesc states, ActionSpaceDesc actions,
                         Objective objective, std::optional<RegularityDecl> regularity)
    : name_(std::move(name)),
      states_(std::move(states)),
      actions_(std::move(actions)),
      objective_(objective),
      regularity_(std::move(regularity)) {
  states_.validate();
  actions_.box.validate(/*strict=*/false);
  if (regularity_) regularity_->validate();
}

Point Environment::sample_reset_state(Rng& rng) const {
  const Box core = states_.core();
  Point x = Point::zeros(core.dim());
  for (std::size_t i = 0; i < core.dim(); ++i) x[i] = rng.uniform(core.lower[i], core.upper[i]);
  return x;
}

void Environment::check_bounded(double value) const {
  if (!regularity_) return;
  if (std::abs(value) > regularity_->c_sup * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << name_ << ": stage value " << value << " exceeds declared c_sup " << regularity_->c_sup;
    throw RegularityViolation(os.str());
  }
}

Transition Environment::step(const Point& x, const Point& u, Rng& rng) const {
  Transition t{sample_next(x, u, rng), stage_value(x, u)};
  check_bounded(t.value);
  return t;
}

// ---------------------------------------------------------------------------
// Ricker

double ricker_utility(double z) { return 3.0 * (std::cbrt(z + 0.5) - std::cbrt(0.5)); }

namespace {

class RickerEnv final : public Environment {
 public:
  RickerEnv(const RickerParams& p, RegularityDecl reg)
      : Environment("ricker", StateSpaceDesc::compact(Box::interval(p.kappa_min, p.kappa_max)),
                    ActionSpaceDesc{Box::interval(p.kappa_min, p.kappa_max)}, Objective::kMaximizeReward,
                    reg),
        p_(p) {}

  double stage_value(const Point& x, const Point& u) const override {
    return x[0] >= u[0] ? ricker_utility(x[0] - u[0]) : 0.0;
  }

  Point sample_noise(Rng& rng) const override { return Point(rng.uniform(0.0, p_.lambda)); }

  Point transition(const Point& x, const Point& u, const Point& noise) const override {
    const double m = std::min(u[0], x[0]);
    const double next = p_.theta1 * m * std::exp(-p_.theta2 * m + noise[0]);
    return Point(std::clamp(next, p_.kappa_min, p_.kappa_max));
  }

 private:
  RickerParams p_;
};

class AdditiveNoiseEnv final : public Environment {
 public:
  AdditiveNoiseEnv(StateSpaceDesc states, double action_bound, double sigma, DriftFn drift,
                   std::optional<double> clamp, std::optional<RegularityDecl> reg)
      : Environment(clamp ? "additive-noise-clamped" : "additive-noise", std::move(states),
                    ActionSpaceDesc{Box::interval(-action_bound, action_bound)}, Objective::kMinimizeCost,
                    std::move(reg)),
        sigma_(sigma),
        drift_(std::move(drift)),
        clamp_(clamp) {}

  double stage_value(const Point& x, const Point& u) const override {
    const double d = x[0] - u[0];
    return d * d;
  }

  Point sample_noise(Rng& rng) const override { return Point(sigma_ * rng.normal()); }

  Point transition(const Point& x, const Point& u, const Point& noise) const override {
    double next = drift_(x[0], u[0]) + noise[0];
    if (clamp_) next = std::clamp(next, -*clamp_, *clamp_);
    return Point(next);
  }

 private:
  double sigma_;
  DriftFn drift_;
  std::optional<double> clamp_;
};

}  // namespace

EnvironmentPtr make_ricker_env(const RickerParams& p) {
  if (!(p.theta1 > 0.0) || !(p.theta2 > 0.0)) throw std::invalid_argument("ricker: theta1, theta2 must be positive");
  if (!(p.kappa_min < p.kappa_max)) throw std::invalid_argument("ricker: kappa_min must be below kappa_max");
  if (!(p.lambda > 0.0)) throw std::invalid_argument("ricker: lambda must be positive");
  if (p.kappa_min < 0.0) throw std::invalid_argument("ricker: kappa_min must be non-negative");
  RegularityDecl reg;
  reg.kind = RegularityClass::kWeak;
  // r'(z) = (z + 0.5)^{-2/3} is largest at z = 0.
  reg.alpha_c = std::pow(0.5, -2.0 / 3.0);
  reg.c_sup = ricker_utility(p.kappa_max - p.kappa_min);
  return std::make_shared<RickerEnv>(p, reg);
}

EnvironmentPtr make_additive_noise_env(double action_bound, double sigma, DriftFn drift,
                                       const AdditiveNoiseOptions& options) {
  if (!(action_bound > 0.0)) throw std::invalid_argument("additive-noise: L must be positive");
  if (!(sigma > 0.0)) throw std::invalid_argument("additive-noise: sigma must be positive");
  if (!drift) throw std::invalid_argument("additive-noise: drift function is required");
  if (!options.clamp_radius) {
    return std::make_shared<AdditiveNoiseEnv>(StateSpaceDesc::euclidean(1, options.truncation_radius),
                                              action_bound, sigma, std::move(drift), std::nullopt,
                                              std::nullopt);
  }
  const double r = *options.clamp_radius;
  if (!(r > 0.0)) throw std::invalid_argument("additive-noise: clamp radius must be positive");
  RegularityDecl reg;
  reg.kind = options.drift_lipschitz ? RegularityClass::kWasserstein : RegularityClass::kWeak;
  reg.alpha_c = 2.0 * (r + action_bound);
  // Clamping is 1-Lipschitz, so W1 between kernels is at most |F(x,a) - F(x',a)|.
  reg.alpha_t = options.drift_lipschitz;
  reg.c_sup = (r + action_bound) * (r + action_bound);
  return std::make_shared<AdditiveNoiseEnv>(StateSpaceDesc::compact(Box::interval(-r, r)), action_bound, sigma,
                                            std::move(drift), r, reg);
}

// ---------------------------------------------------------------------------
// Finite chain

namespace {

RegularityDecl chain_regularity(const std::vector<std::vector<double>>& costs) {
  RegularityDecl reg;
  for (const auto& row : costs)
    for (double c : row) reg.c_sup = std::max(reg.c_sup, std::abs(c));
  return reg;
}

StateSpaceDesc chain_states(std::size_t n) {
  return StateSpaceDesc::compact(Box::interval(-0.5, static_cast<double>(n) - 0.5));
}

}  // namespace

FiniteChainEnv::FiniteChainEnv(std::vector<std::vector<std::vector<double>>> transitions,
                               std::vector<std::vector<double>> costs)
    : Environment("finite-chain", chain_states(costs.size()),
                  ActionSpaceDesc{Box::interval(-0.5, costs.empty() ? 0.5 : costs.front().size() - 0.5)},
                  Objective::kMinimizeCost, chain_regularity(costs)),
      p_(std::move(transitions)),
      costs_(std::move(costs)) {
  if (costs_.empty() || costs_.front().empty()) throw std::invalid_argument("finite-chain: empty state or action set");
  const std::size_t ns = costs_.size();
  const std::size_t na = costs_.front().size();
  if (p_.size() != ns) throw std::invalid_argument("finite-chain: P and C disagree on state count");
  cumulative_.resize(ns);
  for (std::size_t s = 0; s < ns; ++s) {
    if (costs_[s].size() != na || p_[s].size() != na)
      throw std::invalid_argument("finite-chain: ragged action dimension at state " + std::to_string(s));
    cumulative_[s].resize(na);
    for (std::size_t a = 0; a < na; ++a) {
      const auto& row = p_[s][a];
      if (row.size() != ns)
        throw std::invalid_argument("finite-chain: row (" + std::to_string(s) + "," + std::to_string(a) +
                                    ") has wrong length");
      double sum = 0.0;
      auto& cum = cumulative_[s][a];
      cum.resize(ns);
      for (std::size_t j = 0; j < ns; ++j) {
        if (!(row[j] >= 0.0))
          throw std::invalid_argument("finite-chain: negative probability in row (" + std::to_string(s) + "," +
                                      std::to_string(a) + ")");
        sum += row[j];
        cum[j] = sum;
      }
      if (std::abs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("finite-chain: row (" + std::to_string(s) + "," + std::to_string(a) +
                                    ") is not stochastic (sums to " + std::to_string(sum) + ")");
      for (double& c : cum) c /= sum;
    }
  }
}

std::size_t FiniteChainEnv::state_index(const Point& x) const {
  // Piecewise-constant extension: [s - 1/2, s + 1/2) maps to s, matching the singleton-cell quantizer.
  const double n = static_cast<double>(num_states());
  if (x.size() != 1 || !(x[0] >= -0.5 && x[0] <= n - 0.5))
    throw DomainError("finite-chain: " + to_string(x) + " is not a chain state");
  return std::min(static_cast<std::size_t>(std::floor(x[0] + 0.5)), num_states() - 1);
}

std::size_t FiniteChainEnv::action_index(const Point& u) const {
  const double n = static_cast<double>(num_actions());
  if (u.size() != 1 || !(u[0] >= -0.5 && u[0] <= n - 0.5))
    throw DomainError("finite-chain: " + to_string(u) + " is not a chain action");
  return std::min(static_cast<std::size_t>(std::floor(u[0] + 0.5)), num_actions() - 1);
}

double FiniteChainEnv::stage_value(const Point& x, const Point& u) const {
  return costs_[state_index(x)][action_index(u)];
}

Point FiniteChainEnv::sample_noise(Rng& rng) const { return Point(rng.uniform()); }

Point FiniteChainEnv::transition(const Point& x, const Point& u, const Point& noise) const {
  const auto& cum = cumulative_[state_index(x)][action_index(u)];
  // First index whose cumulative mass exceeds the uniform draw.
  const auto it = std::upper_bound(cum.begin(), cum.end(), noise[0]);
  const auto j = static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - cum.begin(), cum.size() - 1));
  return Point(static_cast<double>(j));
}

Point FiniteChainEnv::sample_reset_state(Rng& rng) const {
  return Point(static_cast<double>(rng.index(num_states())));
}

EnvironmentPtr make_finite_chain_env(std::vector<std::vector<std::vector<double>>> transitions,
                                     std::vector<std::vector<double>> costs) {
  if (costs.empty() || costs.front().empty()) throw std::invalid_argument("finite-chain: empty cost matrix");
  return std::make_shared<FiniteChainEnv>(std::move(transitions), std::move(costs));
}

const FiniteChainEnv* as_finite_chain(const Environment& env) {
  return dynamic_cast<const FiniteChainEnv*>(&env);
}

}  // namespace quantq
