#include "vhj/calculus.hpp"
#include "vhj/field_io.hpp"
#include "vhj/grid.hpp"
#include "vhj/quadrature.hpp"

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace vhj;

namespace {

GridPtr grid(int dim, double R, double dx, double T, double dt, bool ball = false)
{
  GridSpec s;
  s.dim = dim;
  s.half_width = R;
  s.dx = dx;
  s.horizon = T;
  s.dt = dt;
  s.ball = ball;
  return make_grid(s);
}

} // namespace

TEST(Grid, CountsNodesAndLevels)
{
  auto g = grid(1, 1.0, 0.25, 1.0, 0.5);
  EXPECT_EQ(g->node_count(), 9);
  EXPECT_EQ(g->level_count(), 3);
  EXPECT_EQ(g->interior_nodes().size(), 7u);
}

TEST(Grid, BallMaskKeepsNodesInsideUnitDisc)
{
  auto g = grid(2, 1.0, 0.5, 1.0, 0.5, true);
  EXPECT_EQ(g->node_count(), 25);
  EXPECT_EQ(g->active_nodes().size(), 9u);
  for (int node : g->active_nodes())
    EXPECT_LT(g->position(node).norm(), 1.0);
}

TEST(Grid, RejectsNonPositiveStep)
{
  GridSpec s;
  s.dx = 0.0;
  try {
    make_grid(s);
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_THAT(e.what(), testing::HasSubstr("positive"));
  }
}

TEST(Grid, ParabolicDistance)
{
  const auto ball = Cylinder::ball(Point::Zero(), 1.0, 0.0, 1.0);
  EXPECT_DOUBLE_EQ(parabolic_distance(Point::Zero(), 0.0, ball, 2, DistanceKind::parabolic), 2.0);
  EXPECT_DOUBLE_EQ(parabolic_distance(Point(1.0, 0.0), 1.0, ball, 2, DistanceKind::parabolic), 0.0);
  EXPECT_DOUBLE_EQ(parabolic_distance(Point(1.0, 0.0), 1.0, ball, 2, DistanceKind::holder, 0.5, 3.0), 0.0);
  const auto big = Cylinder::ball(Point::Zero(), 5.0, 0.0, 8.0);
  EXPECT_NEAR(parabolic_distance(Point(1.0, 0.0), 0.0, big, 2, DistanceKind::holder, 0.5, 3.0),
              2.0 + std::pow(8.0, 1.0 / 6.0), 1e-14);
}

TEST(Calculus, CentralGradient)
{
  auto g = grid(1, 1.0, 0.1, 1.0, 0.5);
  Eigen::VectorXd lin(g->node_count()), quad(g->node_count()), cst(g->node_count());
  for (int n = 0; n < g->node_count(); ++n) {
    const double x = g->position(n)[0];
    lin[n] = 3 * x;
    quad[n] = x * x;
    cst[n] = 7.0;
  }
  const auto dl = gradient_central(*g, lin);
  const auto dq = gradient_central(*g, quad);
  const auto dc = gradient_central(*g, cst);
  for (int n : g->interior_nodes()) {
    EXPECT_NEAR(dl(0, n), 3.0, 1e-12);
    EXPECT_EQ(dc(0, n), 0.0);
  }
  EXPECT_NEAR(dq(0, g->nearest_node(Point(0.5, 0))), 1.0, 1e-12);
}

TEST(Calculus, GodunovMagnitude)
{
  auto g = grid(1, 1.0, 0.125, 1.0, 0.5);
  Eigen::VectorXd a(g->node_count()), b(g->node_count()), c(g->node_count());
  for (int n = 0; n < g->node_count(); ++n) {
    const double x = g->position(n)[0];
    a[n] = std::abs(x);
    b[n] = -std::abs(x);
    c[n] = 3 * x;
  }
  const int kink = g->nearest_node(Point::Zero());
  EXPECT_DOUBLE_EQ(gradient_godunov(*g, a)[kink], 0.0);
  EXPECT_DOUBLE_EQ(gradient_godunov(*g, b)[kink], 1.0);
  const auto gc = gradient_godunov(*g, c);
  for (int n : g->interior_nodes())
    EXPECT_NEAR(gc[n], 3.0, 1e-12);
  EXPECT_EQ(gradient_godunov(*g, Eigen::VectorXd::Constant(g->node_count(), 2.0)).maxCoeff(), 0.0);
}

TEST(Calculus, Laplacian)
{
  auto g1 = grid(1, 1.0, 0.125, 1.0, 0.5);
  auto g2 = grid(2, 1.0, 0.125, 1.0, 0.5);
  const auto q1 = ScalarField::sample(g1, [](const Point& x, double) { return x[0] * x[0]; });
  const auto q2 = ScalarField::sample(g2, [](const Point& x, double) { return x.squaredNorm(); });
  const auto af = ScalarField::sample(g2, [](const Point& x, double) { return 2 * x[0] - x[1] + 1; });
  const auto l1 = laplacian(q1, 0), l2 = laplacian(q2, 0), la = laplacian(af, 0);
  for (int n : g1->interior_nodes())
    EXPECT_NEAR(l1[n], 2.0, 1e-10);
  for (int n : g2->interior_nodes()) {
    EXPECT_NEAR(l2[n], 4.0, 1e-10);
    EXPECT_NEAR(la[n], 0.0, 1e-10);
  }
}

TEST(Quadrature, LqNorms)
{
  auto g = grid(1, 0.5, 0.0625, 1.0, 0.25);
  const Cylinder whole = Cylinder::of(*g);
  Cylinder q = whole;
  q.t1 = 1.0;
  EXPECT_NEAR(lq_norm(ScalarField::constant(g, 2.0), 3.0, q), 2.0, 1e-14);
  EXPECT_EQ(lq_norm(ScalarField::constant(g, 0.0), 2.0, q), 0.0);

  auto h = grid(1, 1.0, 0.01, 1.0, 0.5);
  const auto u = ScalarField::sample(h, [](const Point& x, double) { return x[0]; });
  const auto slab = Cylinder::box(Point(0, 0), Point(1, 0), 0.0, 1.0);
  EXPECT_NEAR(lq_norm(u, 2.0, slab), std::sqrt(1.0 / 3.0), 1e-4);
}

TEST(Quadrature, InterpolationReproducesNodes)
{
  auto g = grid(2, 1.0, 0.25, 1.0, 0.25);
  const auto u = ScalarField::sample(g, [](const Point& x, double t) { return std::sin(x[0]) * x[1] + t; });
  for (int k = 0; k < g->level_count(); ++k)
    for (int n : g->active_nodes())
      EXPECT_EQ(interpolate(u, g->position(n), g->time(k)), u(n, k));
  EXPECT_NEAR(interpolate(u, Point(0.125, 0.0), 0.125), 0.125, 1e-15);
  EXPECT_THROW(interpolate(u, Point(1.5, 0.0), 0.0), std::out_of_range);
}

TEST(FieldIO, RoundTripIsExact)
{
  auto g = grid(2, 1.0, 0.25, 0.5, 0.25, true);
  const auto u = ScalarField::sample(g, [](const Point& x, double t) { return std::exp(x[0]) / 3 + t * x[1]; });
  std::stringstream ss;
  write_field_csv(ss, u);
  ss << "# trailing comment\n";
  const auto v = read_field_csv(ss);
  EXPECT_TRUE(v.grid().spec() == g->spec());
  EXPECT_EQ((v.values() - u.values()).cwiseAbs().maxCoeff(), 0.0);
}

TEST(FieldIO, ParsesGridSpec)
{
  const auto s = parse_grid_spec("2,1,0.25,1,0.5,ball");
  EXPECT_EQ(s.dim, 2);
  EXPECT_DOUBLE_EQ(s.dx, 0.25);
  EXPECT_TRUE(s.ball);
  EXPECT_FALSE(parse_grid_spec("1,1,0.25,1,0.5").ball);
}
