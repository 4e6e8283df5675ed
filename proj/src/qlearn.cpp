#include "quantq/qlearn.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

namespace quantq {

double QTable::row_min(std::size_t i) const {
  const auto first = q.begin() + static_cast<std::ptrdiff_t>(i * num_actions);
  return *std::min_element(first, first + static_cast<std::ptrdiff_t>(num_actions));
}

QFunction QTable::as_q_function(double beta) const {
  return QFunction{num_states, num_actions, q, beta};
}

ExplorationPolicy ExplorationPolicy::uniform(std::size_t num_actions) {
  if (num_actions == 0) throw std::invalid_argument("ExplorationPolicy: no actions");
  ExplorationPolicy p;
  p.uniform_size_ = num_actions;
  p.label_ = "uniform";
  return p;
}

ExplorationPolicy ExplorationPolicy::custom(Sampler sampler, std::string label) {
  if (!sampler) throw std::invalid_argument("ExplorationPolicy: empty sampler");
  ExplorationPolicy p;
  p.sampler_ = std::move(sampler);
  p.label_ = std::move(label);
  return p;
}

std::size_t ExplorationPolicy::operator()(const Point& x, Rng& rng) const {
  if (uniform_size_ > 0) return rng.index(uniform_size_);
  return sampler_(x, rng);
}

LearningResult quantized_q_learning(const Environment& env, const StateQuantizer& q, const ActionNet& actions,
                                    const ExplorationPolicy& exploration, const LearningRun& run,
                                    std::optional<QTable> q0) {
  if (!(run.beta >= 0.0 && run.beta < 1.0)) throw std::invalid_argument("q-learning: beta must lie in [0, 1)");
  const std::size_t m = q.size();
  const std::size_t k = actions.size();
  LearningResult out;
  out.table = q0 ? std::move(*q0) : QTable(m, k);
  QTable& table = out.table;
  if (table.num_states != m || table.num_actions != k)
    throw std::invalid_argument("q-learning: initial table has the wrong shape");
  for (double v : table.q)
    if (!std::isfinite(v)) throw std::invalid_argument("q-learning: initial table must be finite");
  out.bin_visits.assign(m, 0);

  std::vector<double> row_min(m);
  for (std::size_t i = 0; i < m; ++i) row_min[i] = table.row_min(i);

  auto checkpoints = run.checkpoints;
  std::sort(checkpoints.begin(), checkpoints.end());
  auto next_checkpoint = checkpoints.begin();
  auto snapshot = [&] {
    while (next_checkpoint != checkpoints.end() && *next_checkpoint == table.steps) {
      out.checkpoints.push_back({table.steps, table.q});
      ++next_checkpoint;
    }
  };
  snapshot();
  if (run.total_steps == 0) return out;

  const double sign = env.objective() == Objective::kMaximizeReward ? -1.0 : 1.0;
  const double beta = run.beta;
  Rng rng(run.seed);
  auto reset = [&] { return run.reset ? run.reset(rng) : env.sample_reset_state(rng); };
  auto locate = [&](const Point& x) {
    const auto y = q.try_quantize(x);
    if (!y)
      throw DomainError("q-learning: trajectory left the quantized region at step " + std::to_string(table.steps) +
                        " (state " + to_string(x) + ")");
    return *y;
  };

  Point x = reset();
  std::size_t y = locate(x);
  out.episodes = 1;
  std::uint64_t in_episode = 0;

  for (std::uint64_t t = 0; t < run.total_steps; ++t) {
    const std::size_t u = exploration(x, rng);
    if (u >= k) throw std::out_of_range("q-learning: exploration returned an invalid action index");
    const Point& a = actions[u];
    const double value = env.stage_value(x, a);
    if (std::isnan(value)) throw std::runtime_error("q-learning: NaN stage value at step " + std::to_string(t));
    env.check_bounded(value);
    const Point next = env.sample_next(x, a, rng);
    const std::size_t y_next = locate(next);

    const std::size_t idx = y * k + u;
    const std::uint64_t prior = table.visits[idx];
    const double alpha = run.step_size == StepSizeRule::kSampleAverage ? 1.0 / (1.0 + static_cast<double>(prior))
                                                                       : 1.0 / (2.0 + static_cast<double>(prior));
    const double target = sign * value + beta * row_min[y_next];
    const double before = table.q[idx];
    const double after = (1.0 - alpha) * before + alpha * target;
    table.q[idx] = after;
    table.visits[idx] = prior + 1;
    ++out.bin_visits[y];
    if (after < row_min[y])
      row_min[y] = after;
    else if (before == row_min[y] && after != before)
      row_min[y] = table.row_min(y);

    if (run.log) run.log(UpdateRecord{t, y, u, prior, alpha, target, before, after});
    ++table.steps;
    snapshot();

    ++in_episode;
    if (run.episode_length > 0 && in_episode == run.episode_length && t + 1 < run.total_steps) {
      x = reset();
      ++out.episodes;
      in_episode = 0;
    } else {
      x = next;
    }
    y = locate(x);
  }
  return out;
}

StateQuantizer chain_quantizer(std::size_t num_states) {
  return build_uniform_quantizer(-0.5, static_cast<double>(num_states) - 0.5, num_states);
}

ActionNet chain_action_net(std::size_t num_actions) {
  return build_action_net_count(Box::interval(-0.5, static_cast<double>(num_actions) - 0.5), num_actions);
}

LearningResult classic_q_learning(const Environment& finite_env, const ExplorationPolicy& exploration,
                                  const LearningRun& run, std::optional<QTable> q0) {
  const auto* chain = as_finite_chain(finite_env);
  if (!chain) throw std::invalid_argument("classic_q_learning: requires a finite chain environment");
  return quantized_q_learning(finite_env, chain_quantizer(chain->num_states()),
                              chain_action_net(chain->num_actions()), exploration, run, std::move(q0));
}

VisitReport visit_report(const QTable& qt, std::uint64_t floor) {
  VisitReport r;
  r.counts = qt.visits;
  r.min_count = r.counts.empty() ? 0 : *std::min_element(r.counts.begin(), r.counts.end());
  for (std::size_t i = 0; i < qt.num_states; ++i)
    for (std::size_t u = 0; u < qt.num_actions; ++u)
      if (qt.visit_count(i, u) < floor) r.below_floor.emplace_back(i, u);
  if (!r.below_floor.empty())
    r.warnings.push_back(std::to_string(r.below_floor.size()) + " state-action pair(s) visited fewer than " +
                         std::to_string(floor) + " time(s); minimum count " + std::to_string(r.min_count));
  return r;
}

namespace {
constexpr const char* kQTableMagic = "quantq-qtable v1";
}

void write_qtable(std::ostream& os, const QTable& qt) {
  const auto old = os.precision(17);
  os << kQTableMagic << '\n' << qt.num_states << ' ' << qt.num_actions << ' ' << qt.steps << '\n';
  for (std::size_t i = 0; i < qt.num_states; ++i) {
    for (std::size_t u = 0; u < qt.num_actions; ++u) os << (u ? " " : "") << qt.at(i, u);
    os << '\n';
  }
  for (std::size_t i = 0; i < qt.num_states; ++i) {
    for (std::size_t u = 0; u < qt.num_actions; ++u) os << (u ? " " : "") << qt.visit_count(i, u);
    os << '\n';
  }
  os.precision(old);
}

QTable read_qtable(std::istream& is) {
  std::string magic;
  std::getline(is, magic);
  if (magic != kQTableMagic) throw std::runtime_error("read_qtable: bad header line '" + magic + "'");
  std::size_t m = 0, k = 0;
  std::uint64_t steps = 0;
  if (!(is >> m >> k >> steps) || m == 0 || k == 0) throw std::runtime_error("read_qtable: malformed dimensions");
  QTable qt(m, k);
  qt.steps = steps;
  for (auto& v : qt.q)
    if (!(is >> v)) throw std::runtime_error("read_qtable: truncated Q block");
  for (auto& n : qt.visits)
    if (!(is >> n)) throw std::runtime_error("read_qtable: truncated visit block");
  return qt;
}

void write_visit_csv(std::ostream& os, const VisitReport& report, std::size_t num_actions) {
  os << "bin,action,visits\n";
  for (std::size_t idx = 0; idx < report.counts.size(); ++idx)
    os << idx / num_actions << ',' << idx % num_actions << ',' << report.counts[idx] << '\n';
}

UpdateLog csv_update_log(std::ostream& os) {
  os << "t,bin,action,prior_visits,alpha,target\n";
  return [&os](const UpdateRecord& r) {
    const auto old = os.precision(17);
    os << r.t << ',' << r.bin << ',' << r.action << ',' << r.prior_visits << ',' << r.alpha << ',' << r.target
       << '\n';
    os.precision(old);
  };
}

}  // namespace quantq
