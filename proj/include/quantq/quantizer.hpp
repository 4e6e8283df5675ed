#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "quantq/core.hpp"

namespace quantq {

/// Partition of [lo, hi] into cells [e_k, e_{k+1}); the last cell is closed at hi.
class AxisGrid {
 public:
  static AxisGrid uniform(double lo, double hi, std::size_t cells);
  static AxisGrid from_edges(std::vector<double> edges);

  std::size_t size() const { return edges_.size() - 1; }
  double lo() const { return edges_.front(); }
  double hi() const { return edges_.back(); }
  double lower(std::size_t k) const { return edges_[k]; }
  double upper(std::size_t k) const { return edges_[k + 1]; }
  double width(std::size_t k) const { return edges_[k + 1] - edges_[k]; }
  bool is_uniform() const { return uniform_; }

  /// Cell containing x, or nullopt if x is outside [lo, hi].
  std::optional<std::size_t> locate(double x) const;

 private:
  std::vector<double> edges_;
  bool uniform_ = false;
  double step_ = 0.0;
};

struct LossReport {
  double l_bar;    // largest cell diameter; +inf when an overflow cell exists
  double l_minus;  // largest diameter over the non-overflow cells
};

/// State quantizer q: X -> {0, ..., M-1}.
///
/// Interior cells form a product grid over a compact core box. With an
/// overflow cell, index M-1 collects everything outside the core. Cell
/// representatives default to midpoints; the overflow representative sits
/// just outside the upper corner of the core.
class StateQuantizer {
 public:
  static StateQuantizer product(std::vector<AxisGrid> axes, bool overflow);

  std::size_t size() const { return reps_.size(); }
  std::size_t interior_size() const { return interior_; }
  std::size_t dim() const { return axes_.size(); }
  bool has_overflow() const { return overflow_; }
  std::size_t overflow_index() const { return interior_; }
  const std::vector<AxisGrid>& axes() const { return axes_; }
  Box core() const;

  /// Index of the unique cell containing x. Throws DomainError if x lies
  /// outside the core and there is no overflow cell.
  std::size_t quantize(const Point& x) const;
  std::optional<std::size_t> try_quantize(const Point& x) const;

  const Point& representative(std::size_t i) const { return reps_[i]; }
  const std::vector<Point>& representatives() const { return reps_; }
  /// Copy with new representatives; each must lie in its own cell.
  StateQuantizer with_representatives(std::vector<Point> reps) const;
  /// Moves the overflow representative to the side of the core nearest the
  /// sample mean of `overflow_samples` (1-D only).
  StateQuantizer with_overflow_side_from(std::span<const Point> overflow_samples) const;

  /// Bounds of an interior cell.
  Box cell(std::size_t i) const;
  bool is_overflow(std::size_t i) const { return overflow_ && i == interior_; }
  double diameter(std::size_t i) const;
  LossReport losses() const;

 private:
  std::size_t interior_index(const Point& x) const;  // size_t(-1) when outside the core

  std::vector<AxisGrid> axes_;
  bool overflow_ = false;
  std::size_t interior_ = 0;
  std::vector<Point> reps_;
};

/// M equal-width cells on [lo, hi].
StateQuantizer build_uniform_quantizer(double lo, double hi, std::size_t cells);
/// Product of equal-width grids with `cells_per_axis` cells on each axis of `box`.
StateQuantizer build_uniform_quantizer(const Box& box, std::size_t cells_per_axis);
/// Uniform cells of length `bin_len` on [-radius, radius] plus one overflow cell R \ [-radius, radius].
StateQuantizer build_overflow_quantizer(double radius, double bin_len);

/// Monte Carlo estimate of L(x) = E|x - X'| with X' drawn from x's cell weighting.
struct LossEstimate {
  double mean;
  double standard_error;
};

using BinSampler = std::function<Point(Rng&)>;

LossEstimate estimate_loss(const StateQuantizer& q, const Point& x, const BinSampler& bin_sampler,
                           std::size_t n_samples, std::uint64_t seed);

/// Finite action set covering the action box.
class ActionNet {
 public:
  ActionNet(std::vector<Point> points, double resolution);

  std::size_t size() const { return points_.size(); }
  const Point& operator[](std::size_t k) const { return points_[k]; }
  const std::vector<Point>& points() const { return points_; }
  /// Covering radius: every action in the box is within this distance of the net.
  double resolution() const { return resolution_; }

  /// Closest net point; ties go to the smallest index.
  std::size_t nearest(const Point& u) const;

 private:
  std::vector<Point> points_;
  double resolution_;
};

/// Midpoints of equal cells no longer than `bin_len` on each axis.
ActionNet build_action_net(const Box& action_box, double bin_len);
/// Midpoints of `points_per_axis` equal cells on each axis.
ActionNet build_action_net_count(const Box& action_box, std::size_t points_per_axis);

/// Audit sidecar: one row per cell with bounds, representative and diameter.
void write_quantizer_csv(std::ostream& os, const StateQuantizer& q);

}  // namespace quantq
