#include "quantq/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace quantq {

double QFunction::row_min(std::size_t i) const {
  const auto r = row(i);
  return *std::min_element(r.begin(), r.end());
}

void bellman_update(const FiniteModel& fm, double beta, std::span<const double> v, std::span<double> out,
                    std::span<double> q_out) {
  const std::size_t m = fm.num_states();
  const std::size_t k = fm.num_actions();
  for (std::size_t i = 0; i < m; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t u = 0; u < k; ++u) {
      const auto row = fm.row(i, u);
      double ev = 0.0;
      for (std::size_t j = 0; j < m; ++j) ev += row[j] * v[j];
      const double qv = fm.cost(i, u) + beta * ev;
      if (!q_out.empty()) q_out[i * k + u] = qv;
      best = std::min(best, qv);
    }
    out[i] = best;
  }
}

SolveResult value_iteration(const FiniteModel& fm, double beta, double tol, std::size_t max_iters) {
  if (!(beta >= 0.0 && beta < 1.0)) throw std::invalid_argument("value_iteration: beta must lie in [0, 1)");
  if (!(tol > 0.0)) throw std::invalid_argument("value_iteration: tol must be positive");
  const std::size_t m = fm.num_states();
  const double threshold = beta > 0.0 ? tol * (1.0 - beta) / (2.0 * beta) : std::numeric_limits<double>::infinity();

  SolveResult out;
  std::vector<double> v(m, 0.0);
  std::vector<double> next(m, 0.0);
  double residual = std::numeric_limits<double>::infinity();
  std::size_t it = 0;
  while (true) {
    if (it == max_iters)
      throw ConvergenceError("value_iteration: no convergence after " + std::to_string(max_iters) +
                                 " iterations (residual " + std::to_string(residual) + ")",
                             residual);
    bellman_update(fm, beta, v, next);
    residual = 0.0;
    for (std::size_t i = 0; i < m; ++i) residual = std::max(residual, std::abs(next[i] - v[i]));
    out.value.residual_history.push_back(residual);
    v.swap(next);
    ++it;
    if (residual <= threshold) break;
  }

  out.q.num_states = m;
  out.q.num_actions = fm.num_actions();
  out.q.beta = beta;
  out.q.values.assign(m * fm.num_actions(), 0.0);
  out.value.values.assign(m, 0.0);
  bellman_update(fm, beta, v, out.value.values, out.q.values);
  out.value.beta = beta;
  out.value.residual = residual;
  out.value.iterations = it;
  return out;
}

std::vector<std::size_t> greedy_actions(const QFunction& q) {
  std::vector<std::size_t> acts(q.num_states, 0);
  for (std::size_t i = 0; i < q.num_states; ++i) {
    const auto r = q.row(i);
    acts[i] = static_cast<std::size_t>(std::min_element(r.begin(), r.end()) - r.begin());
  }
  return acts;
}

PiecewisePolicy::PiecewisePolicy(std::vector<std::size_t> actions, std::shared_ptr<const StateQuantizer> quantizer,
                                 std::shared_ptr<const ActionNet> net)
    : actions_(std::move(actions)), quantizer_(std::move(quantizer)), net_(std::move(net)) {
  if (!quantizer_ || !net_) throw std::invalid_argument("PiecewisePolicy: null quantizer or action net");
  if (actions_.size() != quantizer_->size())
    throw std::invalid_argument("PiecewisePolicy: one action per quantizer cell is required");
  for (auto a : actions_)
    if (a >= net_->size()) throw std::invalid_argument("PiecewisePolicy: action index out of range");
}

PiecewisePolicy greedy_policy(const QFunction& q, std::shared_ptr<const StateQuantizer> quantizer,
                              std::shared_ptr<const ActionNet> net) {
  return PiecewisePolicy(greedy_actions(q), std::move(quantizer), std::move(net));
}

void write_value_csv(std::ostream& os, const ValueFunction& v, const StateQuantizer& q,
                     std::span<const std::size_t> actions) {
  const auto old = os.precision(17);
  os << "bin,representative,value,action\n";
  for (std::size_t i = 0; i < v.values.size(); ++i)
    os << i << ',' << to_string(q.representative(i)) << ',' << v.values[i] << ',' << actions[i] << '\n';
  os.precision(old);
}

void write_q_csv(std::ostream& os, const QFunction& qf, const StateQuantizer& q) {
  const auto old = os.precision(17);
  os << "bin,representative";
  for (std::size_t u = 0; u < qf.num_actions; ++u) os << ",q" << u;
  os << '\n';
  for (std::size_t i = 0; i < qf.num_states; ++i) {
    os << i << ',' << to_string(q.representative(i));
    for (double x : qf.row(i)) os << ',' << x;
    os << '\n';
  }
  os.precision(old);
}

void write_policy_csv(std::ostream& os, const PiecewisePolicy& p) {
  const auto old = os.precision(17);
  os << "bin,representative,action_index,action\n";
  for (std::size_t i = 0; i < p.actions().size(); ++i)
    os << i << ',' << to_string(p.quantizer().representative(i)) << ',' << p.actions()[i] << ','
       << to_string(p.net()[p.actions()[i]]) << '\n';
  os.precision(old);
}

}  // namespace quantq
