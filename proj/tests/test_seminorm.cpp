#include "vhj/oracles.hpp"
#include "vhj/seminorm.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace vhj;

namespace {

GridPtr grid(int dim, double R, double dx, double T, double dt)
{
  GridSpec s;
  s.dim = dim;
  s.half_width = R;
  s.dx = dx;
  s.horizon = T;
  s.dt = dt;
  return make_grid(s);
}

Cylinder whole(const Grid& g)
{
  Cylinder q = Cylinder::of(g);
  q.t0 = 0.0;
  q.t1 = g.horizon();
  return q;
}

} // namespace

TEST(Seminorm, ConstantFieldVanishes)
{
  auto g = grid(1, 1.0, 0.125, 1.0, 0.25);
  const auto u = ScalarField::constant(g, 5.0);
  const auto s = compute_seminorms(u, 0.5, 0.3, 1.0, 3.0, whole(*g));
  EXPECT_EQ(s.classical.value, 0.0);
  EXPECT_EQ(s.weighted.value, 0.0);
  EXPECT_EQ(s.nl_space.value, 0.0);
  EXPECT_EQ(s.nl_time.value, 0.0);
  EXPECT_EQ(s.nl_combined, 0.0);
}

TEST(Seminorm, LinearInSpaceAttainsLargestSeparation)
{
  auto g = grid(1, 1.0, 0.01, 1.0, 0.5);
  const auto u = ScalarField::sample(g, [](const Point& x, double) { return x[0]; });
  const auto q = Cylinder::box(Point(0, 0), Point(1, 0), 0.0, 0.0);
  const auto v = holder_seminorm(u, 0.5, q);
  EXPECT_NEAR(v.value, 1.0, 1e-14);
  EXPECT_NEAR(std::abs(g->position(v.first.node)[0] - g->position(v.second.node)[0]), 1.0, 1e-12);
}

TEST(Seminorm, LinearInTime)
{
  auto g = grid(1, 0.25, 0.125, 1.0, 0.04);
  const auto u = ScalarField::sample(g, [](const Point&, double t) { return t; });
  EXPECT_NEAR(holder_seminorm(u, 0.5, whole(*g)).value, 1.0, 1e-14);
}

TEST(Seminorm, UnweightedEqualsZeroExponent)
{
  auto g = grid(1, 1.0, 0.125, 1.0, 0.125);
  const auto u = ScalarField::sample(g, [](const Point& x, double t) { return std::sin(3 * x[0]) + t * t; });
  EXPECT_EQ(holder_seminorm(u, 0.4, whole(*g)).value, weighted_holder(u, 0.4, 0.0, whole(*g)).value);
}

TEST(Seminorm, CombinationFormula)
{
  EXPECT_DOUBLE_EQ(combine_nonlinear(0.5, 0.125, 1.0, 3.0), 0.5);
  EXPECT_NEAR(combine_nonlinear(0.1, 0.125, 1.0, 3.0), 0.25, 1e-15);
  EXPECT_DOUBLE_EQ(combine_nonlinear(0.3, 10.0, 1e12, 3.0), 0.3);
}

TEST(Seminorm, CombinedIsMonotoneInZ)
{
  auto g = grid(1, 1.0, 0.125, 1.0, 0.0625);
  const auto u = ScalarField::sample(g, [](const Point& x, double t) { return std::cos(2 * x[0]) * (1 + 3 * t); });
  double prev = 0.0;
  for (double z : {8.0, 4.0, 2.0, 1.0, 0.5, 0.25}) {
    const double v = nonlinear_combined(u, 0.5, z, 3.0, whole(*g)).value;
    const double c = compute_seminorms(u, 0.5, 0.0, z, 3.0, whole(*g)).nl_combined;
    EXPECT_GE(c, prev);
    EXPECT_EQ(v, c);
    prev = c;
  }
}

TEST(Seminorm, MatchesNaiveEnumeration)
{
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> U(-1, 1);
  auto g = grid(2, 0.5, 0.125, 0.5, 0.125);
  auto u = ScalarField::sample(g, [&](const Point&, double) { return U(rng); });
  const auto q = whole(*g);
  const auto a = weighted_holder(u, 0.6, 0.4, q);
  const auto b = oracle::classical(u, 0.6, 0.4, q);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.first.node, b.first.node);
  EXPECT_EQ(a.second.level, b.second.level);
  EXPECT_EQ(nonlinear_space(u, 0.6, 3.5, q).value, oracle::nl_space(u, 0.6, 3.5, q).value);
  EXPECT_EQ(nonlinear_time(u, 0.6, 3.5, q).value, oracle::nl_time(u, 0.6, 3.5, q).value);
}

TEST(Seminorm, SamplingIsSeededAndBelowExact)
{
  auto g = grid(1, 1.0, 0.03125, 1.0, 0.03125);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-1, 1);
  const auto u = ScalarField::sample(g, [&](const Point&, double) { return U(rng); });
  SeminormOptions opts;
  opts.pair_budget = 1000;
  opts.samples = 20000;
  const auto s1 = holder_seminorm(u, 0.5, whole(*g), opts);
  const auto s2 = holder_seminorm(u, 0.5, whole(*g), opts);
  const auto exact = holder_seminorm(u, 0.5, whole(*g));
  EXPECT_EQ(s1.regime, PairRegime::sampled);
  EXPECT_EQ(exact.regime, PairRegime::exact);
  EXPECT_EQ(s1.value, s2.value);
  EXPECT_LE(s1.value, exact.value);
  opts.force_exact = true;
  EXPECT_EQ(holder_seminorm(u, 0.5, whole(*g), opts).value, exact.value);
}

TEST(Seminorm, ParabolicScalingCovariance)
{
  const double alpha = 0.5, r = 0.5;
  auto fn = [](const Point& x, double t) { return std::sin(2 * x[0] + 0.3) * std::exp(-t) + t * t; };
  auto gu = grid(1, 1.0, 0.0625, 1.0, 1.0 / 64);
  auto gv = grid(1, 2.0, 0.125, 4.0, 1.0 / 16);
  const auto u = ScalarField::sample(gu, fn);
  const auto v = ScalarField::sample(gv, [&](const Point& y, double s) {
    return fn(r * y, r * r * s) / std::pow(r, alpha);
  });
  const double a = holder_seminorm(u, alpha, whole(*gu)).value;
  const double b = holder_seminorm(v, alpha, whole(*gv)).value;
  EXPECT_NEAR(a, b, 1e-12 * a);
}

TEST(Seminorm, LipschitzBoundOnSpacePart)
{
  auto g = grid(1, 1.0, 0.0625, 1.0, 0.125);
  const double L = 2.0, alpha = 0.5;
  const auto u = ScalarField::sample(g, [&](const Point& x, double) { return std::sin(L * x[0]); });
  const auto q = whole(*g);
  double wmax = 0.0;
  for (int k = 0; k < g->level_count(); ++k)
    for (int n : g->active_nodes())
      wmax = std::max(wmax, parabolic_distance(g->position(n), g->time(k), q, 1, DistanceKind::holder, alpha, 3.0));
  EXPECT_LE(nonlinear_space(u, alpha, 3.0, q).value, wmax * L * std::pow(2.0, 1 - alpha));
}

TEST(W21q, LinearInTime)
{
  auto g = grid(1, 1.0, 0.0625, 1.0, 0.0625);
  const double c = -1.5;
  const auto u = ScalarField::sample(g, [&](const Point&, double t) { return c * (1.0 - t); });
  const auto sub = Cylinder::box(Point(-0.5, 0), Point(0.5, 0), 0.25, 0.75);
  const auto n = w21q_norms(u, 2.0, 3.0, sub);
  EXPECT_NEAR(n.time_derivative, std::abs(c) * std::sqrt(0.5), 1e-12);
  EXPECT_NEAR(n.hessian, 0.0, 1e-12);
  EXPECT_NEAR(n.gradient_power, 0.0, 1e-12);
}

TEST(W21q, QuadraticHessian)
{
  auto g = grid(1, 1.0, 0.0625, 1.0, 0.0625);
  const auto u = ScalarField::sample(g, [&](const Point& x, double) { return 0.5 * x[0] * x[0]; });
  const auto sub = Cylinder::box(Point(-0.5, 0), Point(0.5, 0), 0.25, 0.75);
  const auto n = w21q_norms(u, 3.0, 3.0, sub);
  EXPECT_NEAR(n.hessian, std::pow(0.5, 1.0 / 3.0), 1e-12);
  EXPECT_NEAR(n.time_derivative, 0.0, 1e-12);
  EXPECT_THROW(w21q_norms(u, 3.0, 3.0, Cylinder::box(Point(-1, 0), Point(1, 0), 0.25, 0.75)), std::invalid_argument);
}
