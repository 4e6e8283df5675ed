#include "quantq/core.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

namespace quantq {

Point::Point(std::initializer_list<double> xs) : size_(xs.size()) {
  if (xs.size() > kMaxDim) throw std::invalid_argument("Point: dimension exceeds kMaxDim");
  std::copy(xs.begin(), xs.end(), data_.begin());
}

Point Point::zeros(std::size_t dim) {
  if (dim > kMaxDim) throw std::invalid_argument("Point: dimension exceeds kMaxDim");
  Point p;
  p.size_ = dim;
  return p;
}

bool operator==(const Point& a, const Point& b) {
  if (a.size_ != b.size_) return false;
  for (std::size_t i = 0; i < a.size_; ++i)
    if (a.data_[i] != b.data_[i]) return false;
  return true;
}

double distance(const Point& a, const Point& b) {
  if (a.size() == 1 && b.size() == 1) return std::abs(a[0] - b[0]);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

std::string to_string(const Point& p) {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < p.size(); ++i) os << (i ? " " : "") << p[i];
  return os.str();
}

bool Box::contains(const Point& p) const {
  if (p.size() != dim()) return false;
  for (std::size_t i = 0; i < dim(); ++i)
    if (!(p[i] >= lower[i] && p[i] <= upper[i])) return false;
  return true;
}

void Box::validate(bool strict) const {
  if (lower.empty() || lower.size() != upper.size() || lower.size() > kMaxDim)
    throw std::invalid_argument("Box: bad dimension");
  for (std::size_t i = 0; i < dim(); ++i) {
    if (!std::isfinite(lower[i]) || !std::isfinite(upper[i]))
      throw std::invalid_argument("Box: bounds must be finite");
    if (strict ? !(lower[i] < upper[i]) : !(lower[i] <= upper[i]))
      throw std::invalid_argument("Box: lower must be below upper on axis " + std::to_string(i));
  }
}

Rng Rng::derive(std::uint64_t seed, std::initializer_list<std::uint64_t> stream) {
  std::vector<std::uint32_t> words;
  words.reserve(2 + 2 * stream.size());
  auto push = [&](std::uint64_t v) {
    words.push_back(static_cast<std::uint32_t>(v));
    words.push_back(static_cast<std::uint32_t>(v >> 32));
  };
  push(seed);
  for (auto s : stream) push(s);
  std::seed_seq seq(words.begin(), words.end());
  std::array<std::uint32_t, 2> raw{};
  seq.generate(raw.begin(), raw.end());
  return Rng((static_cast<std::uint64_t>(raw[1]) << 32) | raw[0]);
}

void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& body) {
  jobs = std::max<std::size_t>(1, std::min(jobs, n));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = n;
      }
    }
  };
  std::vector<std::thread> threads;
  for (std::size_t t = 0; t < jobs; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace quantq
