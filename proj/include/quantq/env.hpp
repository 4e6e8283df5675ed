#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "quantq/core.hpp"

namespace quantq {

/// State space descriptor: either a compact box, or all of R^d with a
/// truncation radius marking the compact core used for resets and overflow
/// quantizers.
struct StateSpaceDesc {
  enum class Kind { kCompactBox, kEuclideanWithOverflow };

  Kind kind = Kind::kCompactBox;
  std::size_t dim = 1;
  Box box;  // kCompactBox only
  double truncation_radius = 0.0;  // kEuclideanWithOverflow only

  static StateSpaceDesc compact(Box b);
  static StateSpaceDesc euclidean(std::size_t dim, double truncation_radius);

  bool contains(const Point& x) const;
  /// The compact core: the box itself, or [-r, r]^d.
  Box core() const;
  void validate() const;
};

struct ActionSpaceDesc {
  Box box;
  std::size_t dim() const { return box.dim(); }
};

enum class Objective { kMinimizeCost, kMaximizeReward };

enum class RegularityClass { kWeak, kWasserstein, kTotalVariation };

std::string to_string(RegularityClass c);

/// Declared regularity constants. Unknown Lipschitz constants stay empty.
struct RegularityDecl {
  RegularityClass kind = RegularityClass::kWeak;
  std::optional<double> alpha_c;
  std::optional<double> alpha_t;
  double c_sup = 0.0;

  void validate() const;
};

struct Transition {
  Point next;
  double value;  // raw stage value (reward for maximize-reward environments)
};

/// Raised when a sampled stage value exceeds the declared bound c_sup.
class RegularityViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A continuous-state MDP accessed through sampling.
///
/// Next states are produced as `transition(x, u, noise)` with noise drawn by
/// `sample_noise`; passing an explicit noise value is the forced-noise hook
/// used for deterministic checks. All methods are const and the object is
/// immutable after construction, so one instance can serve many threads as
/// long as each owns its Rng.
class Environment {
 public:
  Environment(std::string name, StateSpaceDesc states, ActionSpaceDesc actions, Objective objective,
              std::optional<RegularityDecl> regularity);
  virtual ~Environment() = default;

  const std::string& name() const { return name_; }
  const StateSpaceDesc& state_space() const { return states_; }
  const ActionSpaceDesc& action_space() const { return actions_; }
  Objective objective() const { return objective_; }
  const std::optional<RegularityDecl>& regularity() const { return regularity_; }

  /// Stage value as the model defines it (cost, or reward).
  virtual double stage_value(const Point& x, const Point& u) const = 0;
  virtual Point sample_noise(Rng& rng) const = 0;
  virtual Point transition(const Point& x, const Point& u, const Point& noise) const = 0;
  /// Default episode reset: uniform over the compact core of the state space.
  virtual Point sample_reset_state(Rng& rng) const;

  /// Stage value on the minimisation scale: rewards are negated.
  double cost(const Point& x, const Point& u) const {
    const double v = stage_value(x, u);
    return objective_ == Objective::kMaximizeReward ? -v : v;
  }

  Point sample_next(const Point& x, const Point& u, Rng& rng) const {
    return transition(x, u, sample_noise(rng));
  }

  /// One transition with the raw stage value; checks |value| <= c_sup when
  /// a regularity declaration is present.
  Transition step(const Point& x, const Point& u, Rng& rng) const;

  /// Throws RegularityViolation if `value` breaks the declared bound.
  void check_bounded(double value) const;

 private:
  std::string name_;
  StateSpaceDesc states_;
  ActionSpaceDesc actions_;
  Objective objective_;
  std::optional<RegularityDecl> regularity_;
};

using EnvironmentPtr = std::shared_ptr<const Environment>;

struct RickerParams {
  double theta1 = 1.1;
  double theta2 = 0.1;
  double kappa_min = 0.0;
  double kappa_max = 7.0;
  double lambda = 0.5;
};

/// Ricker stock-recruitment fisheries model with escapement action.
///   X' = theta1 * m * exp(-theta2 * m + V),  m = min(U, X),  V ~ U[0, lambda]
///   reward r(X - U) 1{X >= U},  r(z) = 3((z + 0.5)^{1/3} - 0.5^{1/3})
/// Next states leaving [kappa_min, kappa_max] are clamped into it.
EnvironmentPtr make_ricker_env(const RickerParams& params = {});

/// Shifted isoelastic utility used by the Ricker model.
double ricker_utility(double z);

using DriftFn = std::function<double(double x, double a)>;

struct AdditiveNoiseOptions {
  /// Radius of the compact core for resets (non-compact variant).
  double truncation_radius = 1.0;
  /// When set, next states are clamped into [-r, r] and the state space is compact.
  std::optional<double> clamp_radius;
  /// Lipschitz constant of F in x; with a clamp radius this enables a
  /// Wasserstein regularity declaration (alpha_T = this, alpha_c = 2(r + L)).
  std::optional<double> drift_lipschitz;
};

/// X' = F(X, U) + W, W ~ N(0, sigma^2), cost (x - a)^2, actions in [-L, L].
EnvironmentPtr make_additive_noise_env(double action_bound, double sigma, DriftFn drift,
                                       const AdditiveNoiseOptions& options = {});

/// Finite MDP embedded in R: state s is the point s, action a the point a.
/// Points in [s - 1/2, s + 1/2) are treated as s, so a uniform weighting on
/// singleton cells reproduces the chain exactly.
/// `transitions[s][a][s']` must be row-stochastic; `costs[s][a]` are stage costs.
EnvironmentPtr make_finite_chain_env(std::vector<std::vector<std::vector<double>>> transitions,
                                     std::vector<std::vector<double>> costs);

/// Accessor for chain-specific data, for tests and oracles.
class FiniteChainEnv;
const FiniteChainEnv* as_finite_chain(const Environment& env);

class FiniteChainEnv final : public Environment {
 public:
  FiniteChainEnv(std::vector<std::vector<std::vector<double>>> transitions,
                 std::vector<std::vector<double>> costs);

  std::size_t num_states() const { return costs_.size(); }
  std::size_t num_actions() const { return costs_.front().size(); }
  double prob(std::size_t s, std::size_t a, std::size_t next) const { return p_[s][a][next]; }
  double chain_cost(std::size_t s, std::size_t a) const { return costs_[s][a]; }

  double stage_value(const Point& x, const Point& u) const override;
  Point sample_noise(Rng& rng) const override;
  Point transition(const Point& x, const Point& u, const Point& noise) const override;
  Point sample_reset_state(Rng& rng) const override;

  std::size_t state_index(const Point& x) const;
  std::size_t action_index(const Point& u) const;

 private:
  std::vector<std::vector<std::vector<double>>> p_;
  std::vector<std::vector<std::vector<double>>> cumulative_;
  std::vector<std::vector<double>> costs_;
};

}  // namespace quantq
