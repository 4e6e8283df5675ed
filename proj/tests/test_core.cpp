#include <gtest/gtest.h>

#include <atomic>
#include <stdexcept>
#include <vector>

#include "quantq/core.hpp"

using namespace quantq;

TEST(Point, ScalarAndListConstruction) {
  const Point a(1.5);
  EXPECT_EQ(a.size(), 1u);
  EXPECT_EQ(a[0], 1.5);
  const Point b{1.0, 2.0, 3.0};
  EXPECT_EQ(b.size(), 3u);
  EXPECT_EQ(b[2], 3.0);
  EXPECT_THROW((Point{1, 2, 3, 4, 5}), std::invalid_argument);
  EXPECT_EQ(Point::zeros(2), (Point{0.0, 0.0}));
  EXPECT_FALSE(Point(1.0) == (Point{1.0, 0.0}));
}

TEST(Point, EuclideanDistance) {
  EXPECT_DOUBLE_EQ(distance(Point(-1.0), Point(2.5)), 3.5);
  EXPECT_DOUBLE_EQ(distance(Point{0.0, 0.0}, Point{3.0, 4.0}), 5.0);
}

TEST(Point, ToStringRoundTripsDoubles) {
  const Point p{0.1, 1.0 / 3.0};
  EXPECT_EQ(to_string(p), "0.10000000000000001 0.33333333333333331");
}

TEST(Box, ContainsAndValidate) {
  const Box b = Box::interval(0.0, 7.0);
  EXPECT_TRUE(b.contains(Point(0.0)));
  EXPECT_TRUE(b.contains(Point(7.0)));
  EXPECT_FALSE(b.contains(Point(7.0000001)));
  EXPECT_FALSE(b.contains(Point{1.0, 1.0}));
  EXPECT_NO_THROW(Box::interval(1.0, 1.0).validate(false));
  EXPECT_THROW(Box::interval(1.0, 1.0).validate(true), std::invalid_argument);
  EXPECT_THROW(Box::interval(2.0, 1.0).validate(false), std::invalid_argument);
}

TEST(Rng, SameSeedSameStream) {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(a.uniform(), b.uniform());
    EXPECT_EQ(a.normal(), b.normal());
    EXPECT_EQ(a.index(7), b.index(7));
  }
}

TEST(Rng, DerivedStreamsAreDistinctAndStable) {
  Rng a = Rng::derive(5, {1, 2});
  Rng b = Rng::derive(5, {1, 2});
  Rng c = Rng::derive(5, {2, 1});
  const double va = a.uniform();
  EXPECT_EQ(va, b.uniform());
  EXPECT_NE(va, c.uniform());
}

TEST(Rng, UniformRangeAndIndexBounds) {
  Rng r(1);
  for (int i = 0; i < 10000; ++i) {
    const double u = r.uniform(-2.0, 3.0);
    ASSERT_GE(u, -2.0);
    ASSERT_LT(u, 3.0);
    ASSERT_LT(r.index(3), 3u);
  }
}

TEST(ParallelFor, ResultsIndependentOfJobCount) {
  auto run = [](std::size_t jobs) {
    std::vector<double> out(257);
    parallel_for(out.size(), jobs, [&](std::size_t i) {
      Rng r = Rng::derive(9, {i});
      out[i] = r.uniform();
    });
    return out;
  };
  EXPECT_EQ(run(1), run(4));
}

TEST(ParallelFor, VisitsEveryIndexOnce) {
  std::vector<std::atomic<int>> hits(100);
  parallel_for(hits.size(), 3, [&](std::size_t i) { ++hits[i]; });
  for (auto& h : hits) EXPECT_EQ(h.load(), 1);
}

TEST(ParallelFor, RethrowsTaskException) {
  EXPECT_THROW(parallel_for(10, 2,
                            [](std::size_t i) {
                              if (i == 7) throw std::runtime_error("boom");
                            }),
               std::runtime_error);
}
