#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "quantq/quantizer.hpp"

using namespace quantq;

TEST(AxisGrid, UniformEdgesAndLocate) {
  const auto g = AxisGrid::uniform(0.0, 7.0, 10);
  EXPECT_EQ(g.size(), 10u);
  EXPECT_NEAR(g.lower(2), 1.4, 1e-12);
  EXPECT_NEAR(g.upper(2), 2.1, 1e-12);
  EXPECT_EQ(*g.locate(1.5), 2u);
  EXPECT_EQ(*g.locate(0.7), 1u);
  EXPECT_EQ(*g.locate(0.0), 0u);
  EXPECT_EQ(*g.locate(7.0), 9u);
  EXPECT_FALSE(g.locate(-1e-12));
  EXPECT_FALSE(g.locate(7.0 + 1e-12));
  EXPECT_FALSE(g.locate(std::nan("")));
}

TEST(AxisGrid, EdgesBelongToTheUpperCell) {
  const auto g = AxisGrid::uniform(0.0, 1.0, 10);
  for (std::size_t k = 1; k < 10; ++k) {
    EXPECT_EQ(*g.locate(g.lower(k)), k);
    EXPECT_EQ(*g.locate(std::nextafter(g.lower(k), -1.0)), k - 1);
  }
}

TEST(AxisGrid, NonUniformEdges) {
  const auto g = AxisGrid::from_edges({0.0, 0.1, 0.5, 2.0});
  EXPECT_FALSE(g.is_uniform());
  EXPECT_EQ(*g.locate(0.05), 0u);
  EXPECT_EQ(*g.locate(0.1), 1u);
  EXPECT_EQ(*g.locate(2.0), 2u);
  EXPECT_THROW(AxisGrid::from_edges({0.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(AxisGrid::uniform(1.0, 0.0, 3), std::invalid_argument);
  EXPECT_THROW(AxisGrid::uniform(0.0, 1.0, 0), std::invalid_argument);
}

TEST(StateQuantizer, UniformOnTheRickerBox) {
  const auto q = build_uniform_quantizer(0.0, 7.0, 10);
  EXPECT_EQ(q.size(), 10u);
  EXPECT_EQ(q.quantize(Point(1.5)), 2u);
  EXPECT_EQ(q.quantize(Point(0.7)), 1u);
  EXPECT_NEAR(q.representative(2)[0], 1.75, 1e-12);
  EXPECT_NEAR(q.losses().l_bar, 0.7, 1e-12);
  EXPECT_THROW(q.quantize(Point(7.5)), DomainError);
  EXPECT_FALSE(q.try_quantize(Point(-0.1)));
}

TEST(StateQuantizer, SingleCellCoversTheBox) {
  const auto q = build_uniform_quantizer(0.0, 7.0, 1);
  EXPECT_EQ(q.quantize(Point(0.0)), 0u);
  EXPECT_EQ(q.quantize(Point(7.0)), 0u);
  EXPECT_DOUBLE_EQ(q.losses().l_bar, 7.0);
}

TEST(StateQuantizer, EveryPointHasExactlyOneCell) {
  const auto q = build_uniform_quantizer(0.0, 7.0, 37);
  Rng rng(5);
  for (int i = 0; i < 10000; ++i) {
    const double x = rng.uniform(0.0, 7.0);
    const std::size_t k = q.quantize(Point(x));
    const Box b = q.cell(k);
    ASSERT_GE(x, b.lower[0]);
    ASSERT_TRUE(x < b.upper[0] || (k == 36 && x == 7.0));
  }
}

TEST(StateQuantizer, RepresentativesLieInTheirCells) {
  for (std::size_t m : {1u, 3u, 10u, 200u}) {
    const auto q = build_uniform_quantizer(0.0, 7.0, m);
    for (std::size_t i = 0; i < q.size(); ++i) ASSERT_EQ(q.quantize(q.representative(i)), i);
  }
  const auto o = build_overflow_quantizer(0.75, 0.1);
  for (std::size_t i = 0; i < o.size(); ++i) ASSERT_EQ(o.quantize(o.representative(i)), i);
}

TEST(StateQuantizer, OverflowCell) {
  const auto q = build_overflow_quantizer(0.75, 0.1);
  EXPECT_EQ(q.interior_size(), 15u);
  EXPECT_EQ(q.size(), 16u);
  EXPECT_TRUE(q.has_overflow());
  EXPECT_EQ(q.quantize(Point(5.0)), 15u);
  EXPECT_EQ(q.quantize(Point(-5.0)), 15u);
  EXPECT_EQ(q.quantize(Point(0.75)), 14u);
  EXPECT_EQ(q.quantize(Point(-0.75)), 0u);
  EXPECT_TRUE(std::isinf(q.losses().l_bar));
  EXPECT_NEAR(q.losses().l_minus, 0.1, 1e-12);
  EXPECT_TRUE(std::isinf(q.diameter(15)));
  EXPECT_GT(q.representative(15)[0], 0.75);
  EXPECT_THROW(build_overflow_quantizer(0.75, 0.4), std::invalid_argument);
}

TEST(StateQuantizer, OverflowRepresentativeSide) {
  const auto q = build_overflow_quantizer(1.0, 0.5);
  const std::vector<Point> low{Point(-3.0), Point(-2.0), Point(1.5)};
  const auto moved = q.with_overflow_side_from(low);
  EXPECT_LT(moved.representative(moved.overflow_index())[0], -1.0);
  EXPECT_EQ(moved.quantize(moved.representative(moved.overflow_index())), moved.overflow_index());
}

TEST(StateQuantizer, CustomRepresentativesMustStayInCell) {
  const auto q = build_uniform_quantizer(0.0, 1.0, 2);
  EXPECT_NO_THROW(q.with_representatives({Point(0.1), Point(0.9)}));
  EXPECT_THROW(q.with_representatives({Point(0.6), Point(0.9)}), std::invalid_argument);
}

TEST(StateQuantizer, ProductGrid) {
  const auto q = build_uniform_quantizer(Box{{0.0, 0.0}, {1.0, 2.0}}, 2);
  EXPECT_EQ(q.size(), 4u);
  EXPECT_EQ(q.quantize(Point{0.75, 0.5}), 2u);
  EXPECT_NEAR(q.diameter(0), std::sqrt(0.25 + 1.0), 1e-12);
}

TEST(StateQuantizer, QuantizerCsvHasOneRowPerCell) {
  std::ostringstream os;
  write_quantizer_csv(os, build_overflow_quantizer(1.0, 1.0));
  const std::string s = os.str();
  EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 4);
  EXPECT_NE(s.find("2,-inf,inf,"), std::string::npos);
}

TEST(EstimateLoss, UniformCellFromTheEdgeAndCentre) {
  const auto unit = build_uniform_quantizer(0.0, 1.0, 1);
  const auto e0 = estimate_loss(unit, Point(0.0), [](Rng& r) { return Point(r.uniform()); }, 100000, 1);
  EXPECT_NEAR(e0.mean, 0.5, 4 * e0.standard_error);
  const double h = 0.2;
  const auto cell = build_uniform_quantizer(0.0, h, 1);
  const auto ec = estimate_loss(cell, Point(h / 2), [h](Rng& r) { return Point(r.uniform(0.0, h)); }, 100000, 2);
  EXPECT_NEAR(ec.mean, h / 4, 4 * ec.standard_error);
  EXPECT_LE(ec.mean, cell.losses().l_bar);
}

TEST(ActionNet, CountNetMidpointsAndResolution) {
  const auto net = build_action_net_count(Box::interval(0.0, 7.0), 70);
  EXPECT_EQ(net.size(), 70u);
  EXPECT_NEAR(net[0][0], 0.05, 1e-12);
  EXPECT_NEAR(net.resolution(), 0.05, 1e-12);
  Rng rng(7);
  for (int i = 0; i < 1000; ++i) {
    const Point u(rng.uniform(0.0, 7.0));
    ASSERT_LE(distance(u, net[net.nearest(u)]), net.resolution() + 1e-12);
  }
}

TEST(ActionNet, BinLengthNet) {
  const auto net = build_action_net(Box::interval(-0.5, 0.5), 0.02);
  EXPECT_EQ(net.size(), 50u);
  EXPECT_NEAR(net.resolution(), 0.01, 1e-12);
  EXPECT_EQ(build_action_net(Box::interval(0.0, 1.0), 0.3).size(), 4u);
}

TEST(ActionNet, DegenerateBoxHasOnePoint) {
  const auto net = build_action_net(Box::interval(0.5, 0.5), 0.1);
  EXPECT_EQ(net.size(), 1u);
  EXPECT_EQ(net.resolution(), 0.0);
}

TEST(ActionNet, TiesGoToTheSmallestIndex) {
  const ActionNet net({Point(0.0), Point(1.0), Point(2.0)}, 0.5);
  EXPECT_EQ(net.nearest(Point(0.5)), 0u);
  EXPECT_EQ(net.nearest(Point(1.5)), 1u);
  EXPECT_EQ(net.nearest(Point(1.6)), 2u);
}
