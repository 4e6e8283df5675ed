// Independent reference computations for tests. Nothing here calls the
// library's solver or model builder.
#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

using Costs = std::vector<std::vector<double>>;                     // [s][a]
using Kernel = std::vector<std::vector<std::vector<double>>>;       // [s][a][s']

struct Chain {
  Kernel p;
  Costs c;
};

/// Random chain with every transition probability >= floor / S.
Chain random_chain(std::mt19937_64& rng, std::size_t states, std::size_t actions, double floor = 0.2);

/// J of a stationary deterministic policy: (I - beta P_pi)^{-1} c_pi.
std::vector<double> evaluate_policy(const Chain& m, const std::vector<std::size_t>& policy, double beta);

/// Optimal values and Q by enumerating every deterministic policy.
struct Optimum {
  std::vector<double> j;
  std::vector<std::vector<double>> q;  // [s][a]
  std::vector<std::size_t> policy;
};
Optimum enumerate_policies(const Chain& m, double beta);

/// Q = c + beta P J for a given J.
std::vector<std::vector<double>> q_from_values(const Chain& m, const std::vector<double>& j, double beta);

/// Stationary distribution of the chain driven by uniform random actions,
/// from the eigenvector of P_gamma^T for the eigenvalue closest to 1.
std::vector<double> uniform_exploration_stationary(const Chain& m);

/// Exact aggregated model: cell i collects the states with bin_of[s] == i,
/// weighted by pi restricted to the cell.
Chain aggregate(const Chain& m, const std::vector<std::size_t>& bin_of, std::size_t bins, const std::vector<double>& pi);

/// sup |a - b| over matching entries.
double max_abs_diff(const std::vector<std::vector<double>>& a, const std::vector<double>& flat_b);

}  // namespace oracle
