#include "quantq/quantizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace quantq {

namespace {
constexpr std::size_t kOutside = static_cast<std::size_t>(-1);
}

AxisGrid AxisGrid::uniform(double lo, double hi, std::size_t cells) {
  if (cells == 0) throw std::invalid_argument("AxisGrid: cell count must be at least 1");
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
    throw std::invalid_argument("AxisGrid: need finite lo < hi");
  AxisGrid g;
  g.uniform_ = true;
  g.step_ = (hi - lo) / static_cast<double>(cells);
  g.edges_.resize(cells + 1);
  for (std::size_t k = 0; k < cells; ++k) g.edges_[k] = lo + static_cast<double>(k) * g.step_;
  g.edges_[cells] = hi;
  return g;
}

AxisGrid AxisGrid::from_edges(std::vector<double> edges) {
  if (edges.size() < 2) throw std::invalid_argument("AxisGrid: need at least two edges");
  for (std::size_t k = 0; k + 1 < edges.size(); ++k)
    if (!(edges[k] < edges[k + 1])) throw std::invalid_argument("AxisGrid: edges must be strictly increasing");
  AxisGrid g;
  g.edges_ = std::move(edges);
  return g;
}

std::optional<std::size_t> AxisGrid::locate(double x) const {
  if (!(x >= lo() && x <= hi())) return std::nullopt;
  const std::size_t n = size();
  std::size_t k;
  if (uniform_) {
    const double f = std::floor((x - lo()) / step_);
    k = f <= 0.0 ? 0 : std::min(static_cast<std::size_t>(f), n - 1);
    // Floor arithmetic can land one cell off near an edge; the stored edges decide.
    while (k > 0 && x < edges_[k]) --k;
    while (k + 1 < n && x >= edges_[k + 1]) ++k;
  } else {
    const auto it = std::upper_bound(edges_.begin(), edges_.end(), x);
    k = static_cast<std::size_t>(it - edges_.begin());
    k = k == 0 ? 0 : std::min(k - 1, n - 1);
  }
  return k;
}

// ---------------------------------------------------------------------------

StateQuantizer StateQuantizer::product(std::vector<AxisGrid> axes, bool overflow) {
  if (axes.empty() || axes.size() > kMaxDim) throw std::invalid_argument("StateQuantizer: bad dimension");
  StateQuantizer q;
  q.axes_ = std::move(axes);
  q.overflow_ = overflow;
  q.interior_ = 1;
  for (const auto& a : q.axes_) q.interior_ *= a.size();
  q.reps_.reserve(q.interior_ + (overflow ? 1 : 0));
  for (std::size_t i = 0; i < q.interior_; ++i) {
    const Box b = q.cell(i);
    Point y = Point::zeros(q.dim());
    for (std::size_t d = 0; d < q.dim(); ++d) y[d] = 0.5 * (b.lower[d] + b.upper[d]);
    q.reps_.push_back(y);
  }
  if (overflow) {
    Point delta = Point::zeros(q.dim());
    for (std::size_t d = 0; d < q.dim(); ++d)
      delta[d] = std::nextafter(q.axes_[d].hi(), std::numeric_limits<double>::infinity());
    q.reps_.push_back(delta);
  }
  return q;
}

Box StateQuantizer::core() const {
  Box b;
  for (const auto& a : axes_) {
    b.lower.push_back(a.lo());
    b.upper.push_back(a.hi());
  }
  return b;
}

std::size_t StateQuantizer::interior_index(const Point& x) const {
  if (x.size() != dim()) throw std::invalid_argument("StateQuantizer: point dimension mismatch");
  std::size_t idx = 0;
  for (std::size_t d = 0; d < dim(); ++d) {
    const auto k = axes_[d].locate(x[d]);
    if (!k) return kOutside;
    idx = idx * axes_[d].size() + *k;
  }
  return idx;
}

std::optional<std::size_t> StateQuantizer::try_quantize(const Point& x) const {
  const std::size_t i = interior_index(x);
  if (i != kOutside) return i;
  for (double v : x.values())
    if (std::isnan(v)) return std::nullopt;
  if (overflow_) return interior_;
  return std::nullopt;
}

std::size_t StateQuantizer::quantize(const Point& x) const {
  const auto i = try_quantize(x);
  if (!i) throw DomainError("quantize: state " + to_string(x) + " lies outside the quantized region");
  return *i;
}

StateQuantizer StateQuantizer::with_representatives(std::vector<Point> reps) const {
  if (reps.size() != size()) throw std::invalid_argument("StateQuantizer: representative count mismatch");
  for (std::size_t i = 0; i < reps.size(); ++i) {
    const auto j = try_quantize(reps[i]);
    if (!j || *j != i)
      throw std::invalid_argument("StateQuantizer: representative " + std::to_string(i) + " is not in its cell");
  }
  StateQuantizer q = *this;
  q.reps_ = std::move(reps);
  return q;
}

StateQuantizer StateQuantizer::with_overflow_side_from(std::span<const Point> overflow_samples) const {
  if (!overflow_ || dim() != 1) throw std::invalid_argument("StateQuantizer: needs a 1-D overflow quantizer");
  if (overflow_samples.empty()) return *this;
  double mean = 0.0;
  for (const auto& p : overflow_samples) mean += p[0];
  mean /= static_cast<double>(overflow_samples.size());
  const double centre = 0.5 * (axes_[0].lo() + axes_[0].hi());
  StateQuantizer q = *this;
  q.reps_.back() = mean >= centre
                       ? Point(std::nextafter(axes_[0].hi(), std::numeric_limits<double>::infinity()))
                       : Point(std::nextafter(axes_[0].lo(), -std::numeric_limits<double>::infinity()));
  return q;
}

Box StateQuantizer::cell(std::size_t i) const {
  if (i >= interior_) throw std::out_of_range("StateQuantizer::cell: not an interior cell");
  Box b;
  b.lower.resize(dim());
  b.upper.resize(dim());
  for (std::size_t d = dim(); d-- > 0;) {
    const std::size_t k = i % axes_[d].size();
    i /= axes_[d].size();
    b.lower[d] = axes_[d].lower(k);
    b.upper[d] = axes_[d].upper(k);
  }
  return b;
}

double StateQuantizer::diameter(std::size_t i) const {
  if (is_overflow(i)) return std::numeric_limits<double>::infinity();
  const Box b = cell(i);
  if (dim() == 1) return b.upper[0] - b.lower[0];
  double s = 0.0;
  for (std::size_t d = 0; d < dim(); ++d) s += (b.upper[d] - b.lower[d]) * (b.upper[d] - b.lower[d]);
  return std::sqrt(s);
}

LossReport StateQuantizer::losses() const {
  double interior_max = 0.0;
  if (dim() == 1) {
    for (std::size_t k = 0; k < axes_[0].size(); ++k) interior_max = std::max(interior_max, axes_[0].width(k));
  } else {
    for (std::size_t i = 0; i < interior_; ++i) interior_max = std::max(interior_max, diameter(i));
  }
  return LossReport{overflow_ ? std::numeric_limits<double>::infinity() : interior_max, interior_max};
}

StateQuantizer build_uniform_quantizer(double lo, double hi, std::size_t cells) {
  return StateQuantizer::product({AxisGrid::uniform(lo, hi, cells)}, false);
}

StateQuantizer build_uniform_quantizer(const Box& box, std::size_t cells_per_axis) {
  box.validate(/*strict=*/true);
  std::vector<AxisGrid> axes;
  for (std::size_t d = 0; d < box.dim(); ++d) axes.push_back(AxisGrid::uniform(box.lower[d], box.upper[d], cells_per_axis));
  return StateQuantizer::product(std::move(axes), false);
}

StateQuantizer build_overflow_quantizer(double radius, double bin_len) {
  if (!(radius > 0.0) || !(bin_len > 0.0))
    throw std::invalid_argument("overflow quantizer: radius and bin length must be positive");
  const double ratio = 2.0 * radius / bin_len;
  const double cells = std::round(ratio);
  if (cells < 1.0 || std::abs(ratio - cells) > 1e-9)
    throw std::invalid_argument("overflow quantizer: 2*radius is not a multiple of the bin length");
  return StateQuantizer::product({AxisGrid::uniform(-radius, radius, static_cast<std::size_t>(cells))}, true);
}

LossEstimate estimate_loss(const StateQuantizer& q, const Point& x, const BinSampler& bin_sampler,
                           std::size_t n_samples, std::uint64_t seed) {
  if (n_samples == 0) throw std::invalid_argument("estimate_loss: n_samples must be positive");
  const std::size_t bin = q.quantize(x);
  if (q.diameter(bin) == 0.0) return {0.0, 0.0};
  Rng rng(seed);
  double sum = 0.0;
  double sumsq = 0.0;
  for (std::size_t s = 0; s < n_samples; ++s) {
    const double d = distance(x, bin_sampler(rng));
    sum += d;
    sumsq += d * d;
  }
  const double n = static_cast<double>(n_samples);
  const double mean = sum / n;
  const double var = n > 1 ? std::max(0.0, (sumsq - n * mean * mean) / (n - 1.0)) : 0.0;
  return {mean, std::sqrt(var / n)};
}

// ---------------------------------------------------------------------------

ActionNet::ActionNet(std::vector<Point> points, double resolution)
    : points_(std::move(points)), resolution_(resolution) {
  if (points_.empty()) throw std::invalid_argument("ActionNet: needs at least one point");
  if (!(resolution_ >= 0.0)) throw std::invalid_argument("ActionNet: resolution must be non-negative");
}

std::size_t ActionNet::nearest(const Point& u) const {
  std::size_t best = 0;
  double best_d = distance(u, points_[0]);
  for (std::size_t k = 1; k < points_.size(); ++k) {
    const double d = distance(u, points_[k]);
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  return best;
}

namespace {

ActionNet net_from_counts(const Box& box, const std::vector<std::size_t>& counts) {
  const std::size_t dim = box.dim();
  std::vector<std::vector<double>> axis_points(dim);
  double radius_sq = 0.0;
  for (std::size_t d = 0; d < dim; ++d) {
    const double width = (box.upper[d] - box.lower[d]) / static_cast<double>(counts[d]);
    for (std::size_t k = 0; k < counts[d]; ++k)
      axis_points[d].push_back(box.lower[d] + (static_cast<double>(k) + 0.5) * width);
    radius_sq += 0.25 * width * width;
  }
  std::vector<Point> points;
  std::size_t total = 1;
  for (auto c : counts) total *= c;
  points.reserve(total);
  for (std::size_t flat = 0; flat < total; ++flat) {
    Point p = Point::zeros(dim);
    std::size_t rest = flat;
    for (std::size_t d = dim; d-- > 0;) {
      p[d] = axis_points[d][rest % counts[d]];
      rest /= counts[d];
    }
    points.push_back(p);
  }
  return ActionNet(std::move(points), std::sqrt(radius_sq));
}

}  // namespace

ActionNet build_action_net(const Box& action_box, double bin_len) {
  if (!(bin_len > 0.0)) throw std::invalid_argument("action net: bin length must be positive");
  action_box.validate(/*strict=*/false);
  std::vector<std::size_t> counts;
  for (std::size_t d = 0; d < action_box.dim(); ++d) {
    const double span = action_box.upper[d] - action_box.lower[d];
    const double cells = std::ceil(span / bin_len - 1e-9);
    counts.push_back(cells < 1.0 ? 1 : static_cast<std::size_t>(cells));
  }
  return net_from_counts(action_box, counts);
}

ActionNet build_action_net_count(const Box& action_box, std::size_t points_per_axis) {
  if (points_per_axis == 0) throw std::invalid_argument("action net: need at least one point per axis");
  action_box.validate(/*strict=*/false);
  return net_from_counts(action_box, std::vector<std::size_t>(action_box.dim(), points_per_axis));
}

void write_quantizer_csv(std::ostream& os, const StateQuantizer& q) {
  const auto old = os.precision(17);
  os << "bin,lower,upper,representative,diameter,overflow\n";
  for (std::size_t i = 0; i < q.size(); ++i) {
    os << i << ',';
    if (q.is_overflow(i)) {
      os << "-inf,inf";
    } else {
      const Box b = q.cell(i);
      for (std::size_t d = 0; d < b.dim(); ++d) os << (d ? " " : "") << b.lower[d];
      os << ',';
      for (std::size_t d = 0; d < b.dim(); ++d) os << (d ? " " : "") << b.upper[d];
    }
    os << ',' << to_string(q.representative(i)) << ',' << q.diameter(i) << ',' << (q.is_overflow(i) ? 1 : 0)
       << '\n';
  }
  os.precision(old);
}

}  // namespace quantq
