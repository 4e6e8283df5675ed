#include "quantq/finite_model.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace quantq {

WeightingMeasure WeightingMeasure::uniform(std::shared_ptr<const StateQuantizer> q) {
  if (!q) throw std::invalid_argument("WeightingMeasure: null quantizer");
  WeightingMeasure w;
  w.kind_ = q->has_overflow() ? Kind::kMixtureWithOverflowAtom : Kind::kUniformOnBin;
  w.q_ = std::move(q);
  return w;
}

WeightingMeasure WeightingMeasure::empirical(std::shared_ptr<const StateQuantizer> q,
                                             std::span<const Point> trajectory) {
  if (!q) throw std::invalid_argument("WeightingMeasure: null quantizer");
  WeightingMeasure w;
  w.kind_ = Kind::kEmpirical;
  w.visited_.resize(q->size());
  for (const auto& x : trajectory) w.visited_[q->quantize(x)].push_back(x);
  for (std::size_t i = 0; i < w.visited_.size(); ++i)
    if (w.visited_[i].empty())
      throw std::invalid_argument("WeightingMeasure: bin " + std::to_string(i) +
                                  " was never visited; the weighting measure needs positive mass on every bin");
  w.q_ = std::move(q);
  return w;
}

Point WeightingMeasure::sample(std::size_t bin, Rng& rng) const {
  if (kind_ == Kind::kEmpirical) {
    const auto& pts = visited_[bin];
    return pts[pts.size() == 1 ? 0 : rng.index(pts.size())];
  }
  if (q_->is_overflow(bin)) return q_->representative(bin);
  const Box b = q_->cell(bin);
  Point x = Point::zeros(b.dim());
  for (std::size_t d = 0; d < b.dim(); ++d) {
    // Cells are half-open; keep rounding from producing the upper edge.
    x[d] = std::min(rng.uniform(b.lower[d], b.upper[d]), std::nextafter(b.upper[d], b.lower[d]));
  }
  return x;
}

std::optional<double> WeightingMeasure::exact_loss(std::size_t bin, const Point& x) const {
  if (kind_ == Kind::kEmpirical) {
    double s = 0.0;
    for (const auto& v : visited_[bin]) s += distance(x, v);
    return s / static_cast<double>(visited_[bin].size());
  }
  if (q_->is_overflow(bin)) return distance(x, q_->representative(bin));
  if (q_->dim() != 1) return std::nullopt;
  const Box b = q_->cell(bin);
  const double a = b.lower[0];
  const double c = b.upper[0];
  const double t = std::clamp(x[0], a, c);
  // E|x - U| for U ~ Uniform[a, c], x inside the cell.
  return ((t - a) * (t - a) + (c - t) * (c - t)) / (2.0 * (c - a)) + std::abs(x[0] - t);
}

WeightingMeasure make_weighting_measure(WeightingMeasure::Kind kind, std::shared_ptr<const StateQuantizer> q,
                                        std::optional<std::span<const Point>> trajectory) {
  switch (kind) {
    case WeightingMeasure::Kind::kUniformOnBin:
    case WeightingMeasure::Kind::kMixtureWithOverflowAtom:
      return WeightingMeasure::uniform(std::move(q));
    case WeightingMeasure::Kind::kEmpirical:
      if (!trajectory) throw std::invalid_argument("empirical weighting measure needs a trajectory");
      return WeightingMeasure::empirical(std::move(q), *trajectory);
  }
  throw std::invalid_argument("unknown weighting measure kind");
}

// ---------------------------------------------------------------------------

FiniteModel::FiniteModel(std::size_t num_states, std::size_t num_actions)
    : m_(num_states),
      k_(num_actions),
      cost_(num_states * num_actions, 0.0),
      p_(num_states * num_actions * num_states, 0.0),
      cost_se_(num_states * num_actions, 0.0),
      p_se_(num_states * num_actions * num_states, 0.0) {
  if (num_states == 0 || num_actions == 0) throw std::invalid_argument("FiniteModel: empty dimensions");
}

FiniteModel FiniteModel::from_dense(const std::vector<std::vector<double>>& costs,
                                    const std::vector<std::vector<std::vector<double>>>& transitions) {
  if (costs.empty() || costs.front().empty()) throw std::invalid_argument("FiniteModel: empty cost matrix");
  const std::size_t m = costs.size();
  const std::size_t k = costs.front().size();
  if (transitions.size() != m) throw std::invalid_argument("FiniteModel: P and C disagree on state count");
  FiniteModel fm(m, k);
  for (std::size_t i = 0; i < m; ++i) {
    if (costs[i].size() != k || transitions[i].size() != k)
      throw std::invalid_argument("FiniteModel: ragged action dimension at state " + std::to_string(i));
    for (std::size_t u = 0; u < k; ++u) {
      fm.cost(i, u) = costs[i][u];
      if (transitions[i][u].size() != m) throw std::invalid_argument("FiniteModel: bad row length");
      double sum = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        fm.prob(i, u, j) = transitions[i][u][j];
        sum += transitions[i][u][j];
      }
      if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("FiniteModel: row (" + std::to_string(i) + "," + std::to_string(u) +
                                    ") is not stochastic");
    }
  }
  return fm;
}

FiniteModel construct_finite_model(const Environment& env, const StateQuantizer& q, const ActionNet& actions,
                                   const WeightingMeasure& weighting, const ModelSampling& sampling) {
  if (sampling.outer_samples == 0 || sampling.inner_samples == 0)
    throw std::invalid_argument("construct_finite_model: sample counts must be at least 1");
  const std::size_t m = q.size();
  const std::size_t k = actions.size();
  FiniteModel fm(m, k);
  fm.seed = sampling.seed;
  fm.outer_samples = sampling.outer_samples;
  fm.inner_samples = sampling.inner_samples;
  const bool reward = env.objective() == Objective::kMaximizeReward;
  const double n_outer = static_cast<double>(sampling.outer_samples);
  const double total = n_outer * static_cast<double>(sampling.inner_samples);
  std::vector<double> deviation(m, 0.0);

  parallel_for(m, sampling.jobs, [&](std::size_t i) {
    std::vector<std::uint64_t> counts(m, 0);
    std::vector<double> sumsq(m, 0.0);
    std::vector<std::pair<std::size_t, std::uint64_t>> local;
    for (std::size_t u = 0; u < k; ++u) {
      const Point& a = actions[u];
      Rng rng = Rng::derive(sampling.seed, {i, u});
      std::fill(counts.begin(), counts.end(), 0);
      std::fill(sumsq.begin(), sumsq.end(), 0.0);
      // Costs are accumulated as offsets from the first draw, so a cell with a
      // constant cost reproduces it exactly with zero standard error.
      double c_shift = 0.0;
      double c_sum = 0.0;
      double c_sumsq = 0.0;
      for (std::size_t o = 0; o < sampling.outer_samples; ++o) {
        const Point x = weighting.sample(i, rng);
        const double value = env.stage_value(x, a);
        env.check_bounded(value);
        const double c = reward ? -value : value;
        if (!std::isfinite(c))
          throw std::runtime_error("construct_finite_model: non-finite cost at (bin " + std::to_string(i) +
                                   ", action " + std::to_string(u) + ")");
        if (o == 0) c_shift = c;
        c_sum += c - c_shift;
        c_sumsq += (c - c_shift) * (c - c_shift);
        local.clear();
        for (std::size_t s = 0; s < sampling.inner_samples; ++s) {
          std::size_t j;
          try {
            j = q.quantize(env.sample_next(x, a, rng));
          } catch (const std::exception& e) {
            throw std::runtime_error("construct_finite_model: sampling failed at (bin " + std::to_string(i) +
                                     ", action " + std::to_string(u) + "): " + e.what());
          }
          auto it = std::find_if(local.begin(), local.end(), [j](const auto& p) { return p.first == j; });
          if (it == local.end())
            local.emplace_back(j, 1);
          else
            ++it->second;
        }
        for (const auto& [j, cnt] : local) {
          counts[j] += cnt;
          const double f = static_cast<double>(cnt) / static_cast<double>(sampling.inner_samples);
          sumsq[j] += f * f;
        }
      }
      const double c_offset = c_sum / n_outer;
      fm.cost(i, u) = c_shift + c_offset;
      fm.cost_se(i, u) =
          sampling.outer_samples > 1
              ? std::sqrt(std::max(0.0, (c_sumsq - n_outer * c_offset * c_offset) / (n_outer - 1.0)) / n_outer)
              : std::numeric_limits<double>::infinity();
      std::uint64_t mass = 0;
      for (auto c : counts) mass += c;
      deviation[i] = std::max(deviation[i], std::abs(static_cast<double>(mass) / total - 1.0));
      auto row = fm.row(i, u);
      for (std::size_t j = 0; j < m; ++j) {
        const double p = static_cast<double>(counts[j]) / static_cast<double>(mass);
        row[j] = p;
        // Clustered standard error: variance across outer draws of the per-draw landing fraction.
        double se = std::numeric_limits<double>::infinity();
        if (sampling.outer_samples > 1)
          se = std::sqrt(std::max(0.0, (sumsq[j] - n_outer * p * p) / (n_outer - 1.0)) / n_outer);
        fm.prob_se(i, u, j) = se;
      }
    }
  });
  fm.max_prenormalization_deviation = *std::max_element(deviation.begin(), deviation.end());
  return fm;
}

ValidationReport validate_model(const FiniteModel& fm, double se_threshold) {
  ValidationReport report;
  const std::size_t m = fm.num_states();
  const std::size_t k = fm.num_actions();
  auto where = [](std::size_t i, std::size_t u) {
    return "(" + std::to_string(i) + "," + std::to_string(u) + ")";
  };
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t u = 0; u < k; ++u) {
      if (!std::isfinite(fm.cost(i, u)))
        report.flags.push_back({ModelFlag::Kind::kNonFiniteCost, i, u, std::nullopt, "non-finite cost at " + where(i, u)});
      if (fm.cost_se(i, u) > se_threshold)
        report.flags.push_back({ModelFlag::Kind::kHighStandardError, i, u, std::nullopt,
                                "cost standard error above threshold at " + where(i, u)});
      double sum = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        const double p = fm.prob(i, u, j);
        sum += p;
        if (!(p >= 0.0 && p <= 1.0))
          report.flags.push_back({ModelFlag::Kind::kProbabilityRange, i, u, j,
                                  "probability outside [0,1] at " + where(i, u) + "->" + std::to_string(j)});
        if (fm.prob_se(i, u, j) > se_threshold)
          report.flags.push_back({ModelFlag::Kind::kHighStandardError, i, u, j,
                                  "transition standard error above threshold at " + where(i, u) + "->" +
                                      std::to_string(j)});
      }
      if (!(std::abs(sum - 1.0) <= 1e-9))
        report.flags.push_back({ModelFlag::Kind::kRowSum, i, u, std::nullopt,
                                "row " + where(i, u) + " sums to " + std::to_string(sum)});
    }
  }
  return report;
}

namespace {
constexpr const char* kModelMagic = "quantq-finite-model v1";
}

void write_finite_model(std::ostream& os, const FiniteModel& fm) {
  const auto old = os.precision(17);
  os << kModelMagic << '\n';
  os << fm.num_states() << ' ' << fm.num_actions() << ' ' << fm.seed << ' ' << fm.outer_samples << ' '
     << fm.inner_samples << '\n';
  for (std::size_t i = 0; i < fm.num_states(); ++i) {
    for (std::size_t u = 0; u < fm.num_actions(); ++u) os << (u ? " " : "") << fm.cost(i, u);
    os << '\n';
  }
  for (std::size_t i = 0; i < fm.num_states(); ++i) {
    for (std::size_t u = 0; u < fm.num_actions(); ++u) {
      const auto row = fm.row(i, u);
      for (std::size_t j = 0; j < row.size(); ++j) os << (j ? " " : "") << row[j];
      os << '\n';
    }
  }
  os.precision(old);
}

FiniteModel read_finite_model(std::istream& is) {
  std::string magic;
  std::getline(is, magic);
  if (magic != kModelMagic) throw std::runtime_error("read_finite_model: bad header line '" + magic + "'");
  std::size_t m = 0, k = 0;
  FiniteModel header;
  if (!(is >> m >> k >> header.seed >> header.outer_samples >> header.inner_samples))
    throw std::runtime_error("read_finite_model: malformed dimensions line");
  FiniteModel fm(m, k);
  fm.seed = header.seed;
  fm.outer_samples = header.outer_samples;
  fm.inner_samples = header.inner_samples;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t u = 0; u < k; ++u)
      if (!(is >> fm.cost(i, u))) throw std::runtime_error("read_finite_model: truncated cost block");
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t u = 0; u < k; ++u)
      for (std::size_t j = 0; j < m; ++j)
        if (!(is >> fm.prob(i, u, j))) throw std::runtime_error("read_finite_model: truncated transition block");
  return fm;
}

}  // namespace quantq
