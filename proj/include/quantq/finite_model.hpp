#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "quantq/core.hpp"
#include "quantq/env.hpp"
#include "quantq/quantizer.hpp"

namespace quantq {

/// Per-cell sampler for the normalised weighting measure on each quantizer cell.
class WeightingMeasure {
 public:
  enum class Kind { kUniformOnBin, kMixtureWithOverflowAtom, kEmpirical };

  /// Uniform on each interior cell; on a quantizer with an overflow cell the
  /// overflow sampler is the point mass at its representative.
  static WeightingMeasure uniform(std::shared_ptr<const StateQuantizer> q);
  /// Resamples the visited states of `trajectory` falling in each cell.
  /// Throws if some cell is never visited.
  static WeightingMeasure empirical(std::shared_ptr<const StateQuantizer> q, std::span<const Point> trajectory);

  Kind kind() const { return kind_; }
  const StateQuantizer& quantizer() const { return *q_; }

  /// Draw from the normalised measure on cell `bin`; the draw lies in that cell.
  Point sample(std::size_t bin, Rng& rng) const;
  /// Closed-form L(x) = E|x - X'| when the cell measure permits one
  /// (uniform on a 1-D interval, or a point mass).
  std::optional<double> exact_loss(std::size_t bin, const Point& x) const;

 private:
  Kind kind_ = Kind::kUniformOnBin;
  std::shared_ptr<const StateQuantizer> q_;
  std::vector<std::vector<Point>> visited_;  // empirical kind only
};

WeightingMeasure make_weighting_measure(WeightingMeasure::Kind kind, std::shared_ptr<const StateQuantizer> q,
                                        std::optional<std::span<const Point>> trajectory = std::nullopt);

/// Finite MDP on quantizer cells x action-net points.
///
/// `cost(i, u)` is on the minimisation scale. Transition rows are stored
/// contiguously: `row(i, u)[j]` = P(j | i, u).
class FiniteModel {
 public:
  FiniteModel() = default;
  FiniteModel(std::size_t num_states, std::size_t num_actions);
  /// Dense construction from C[s][a] and P[s][a][s'], validated to be row-stochastic within 1e-9.
  static FiniteModel from_dense(const std::vector<std::vector<double>>& costs,
                                const std::vector<std::vector<std::vector<double>>>& transitions);

  std::size_t num_states() const { return m_; }
  std::size_t num_actions() const { return k_; }

  double cost(std::size_t i, std::size_t u) const { return cost_[i * k_ + u]; }
  double& cost(std::size_t i, std::size_t u) { return cost_[i * k_ + u]; }
  double prob(std::size_t i, std::size_t u, std::size_t j) const { return p_[(i * k_ + u) * m_ + j]; }
  double& prob(std::size_t i, std::size_t u, std::size_t j) { return p_[(i * k_ + u) * m_ + j]; }
  std::span<const double> row(std::size_t i, std::size_t u) const { return {p_.data() + (i * k_ + u) * m_, m_}; }
  std::span<double> row(std::size_t i, std::size_t u) { return {p_.data() + (i * k_ + u) * m_, m_}; }

  // Provenance of Monte Carlo estimates. Standard errors are zero for dense models.
  double cost_se(std::size_t i, std::size_t u) const { return cost_se_[i * k_ + u]; }
  double prob_se(std::size_t i, std::size_t u, std::size_t j) const { return p_se_[(i * k_ + u) * m_ + j]; }
  double& cost_se(std::size_t i, std::size_t u) { return cost_se_[i * k_ + u]; }
  double& prob_se(std::size_t i, std::size_t u, std::size_t j) { return p_se_[(i * k_ + u) * m_ + j]; }

  std::uint64_t seed = 0;
  std::size_t outer_samples = 0;  // state draws per (cell, action)
  std::size_t inner_samples = 0;  // next-state draws per state draw
  /// Largest |tally mass / draws - 1| over rows before normalisation.
  double max_prenormalization_deviation = 0.0;

  friend bool operator==(const FiniteModel&, const FiniteModel&) = default;

 private:
  std::size_t m_ = 0;
  std::size_t k_ = 0;
  std::vector<double> cost_;
  std::vector<double> p_;
  std::vector<double> cost_se_;
  std::vector<double> p_se_;
};

struct ModelSampling {
  std::size_t outer_samples = 1000;
  std::size_t inner_samples = 10;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
};

/// Nested Monte Carlo estimate of the weighted finite model:
///   C(i,u)   = E[c(X,u)],             X ~ weighting on cell i
///   P(j|i,u) = E[T(cell j | X, u)],   by tallying quantized next states
/// Each (cell, action) pair uses its own stream derived from (seed, i, u).
FiniteModel construct_finite_model(const Environment& env, const StateQuantizer& q, const ActionNet& actions,
                                   const WeightingMeasure& weighting, const ModelSampling& sampling);

struct ModelFlag {
  enum class Kind { kRowSum, kProbabilityRange, kNonFiniteCost, kHighStandardError };
  Kind kind;
  std::size_t state;
  std::size_t action;
  std::optional<std::size_t> next;  // set for per-entry flags
  std::string message;
};

struct ValidationReport {
  std::vector<ModelFlag> flags;
  bool ok() const { return flags.empty(); }
};

/// Stochasticity, finiteness, and standard-error screening. Never throws.
ValidationReport validate_model(const FiniteModel& fm, double se_threshold = 0.05);

/// Flat text format: magic line, "M K seed outer inner", M rows of K costs,
/// then M*K rows of M probabilities ordered by (state, action).
void write_finite_model(std::ostream& os, const FiniteModel& fm);
FiniteModel read_finite_model(std::istream& is);

}  // namespace quantq
