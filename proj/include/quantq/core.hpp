#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace quantq {

/// Upper bound on state/action dimension. All benchmark problems are 1-D.
inline constexpr std::size_t kMaxDim = 4;

/// A point in R^d with inline storage; states, actions and noise draws all use it.
class Point {
 public:
  Point() = default;
  explicit Point(double x) : size_(1) { data_[0] = x; }
  Point(std::initializer_list<double> xs);
  static Point zeros(std::size_t dim);

  std::size_t size() const { return size_; }
  double operator[](std::size_t i) const { return data_[i]; }
  double& operator[](std::size_t i) { return data_[i]; }
  std::span<const double> values() const { return {data_.data(), size_}; }

  friend bool operator==(const Point& a, const Point& b);

 private:
  std::array<double, kMaxDim> data_{};
  std::size_t size_ = 0;
};

double distance(const Point& a, const Point& b);
std::string to_string(const Point& p);

/// Axis-aligned closed box [lower, upper] in R^d.
struct Box {
  std::vector<double> lower;
  std::vector<double> upper;

  static Box interval(double lo, double hi) { return Box{{lo}, {hi}}; }
  std::size_t dim() const { return lower.size(); }
  bool contains(const Point& p) const;
  /// Throws std::invalid_argument unless lower <= upper on every axis.
  void validate(bool strict) const;
};

/// Seeded random stream. Identical seeds give identical draws.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  /// Independent stream for a (seed, stream...) tuple, via std::seed_seq.
  static Rng derive(std::uint64_t seed, std::initializer_list<std::uint64_t> stream);

  double uniform() { return unit_(engine_); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit_(engine_); }
  double normal() { return normal_(engine_); }
  std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_); }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::uniform_real_distribution<double> unit_{0.0, 1.0};
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Point outside the state space with no overflow cell to absorb it.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Runs body(i) for i in [0, n) on up to `jobs` threads. Work is split by
/// index, so results never depend on the thread count. The first exception
/// thrown by any task is rethrown after all threads join.
void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& body);

}  // namespace quantq
