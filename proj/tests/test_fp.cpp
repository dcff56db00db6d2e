#include "vhj/dual.hpp"
#include "vhj/exponents.hpp"
#include "vhj/fp.hpp"
#include "vhj/hj.hpp"
#include "vhj/oracles.hpp"
#include "vhj/quadrature.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

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

FPSolution heat(GridPtr g, double sigma = 1.0, Point x0 = Point::Zero())
{
  return solve_fp({sigma, VectorField(g), x0});
}

} // namespace

TEST(Drift, FromSolution)
{
  auto g = grid(1, 1.0, 0.125, 1.0, 0.25);
  EXPECT_EQ(drift_from_solution(ScalarField::constant(g, 2.0), 1.0, 3.0).max_norm(), 0.0);
  const auto b = drift_from_solution(ScalarField::sample(g, [](const Point& x, double) { return 3 * x[0]; }), 1.0, 3.0);
  for (int n : g->active_nodes())
    EXPECT_NEAR(b.at(n, 0)[0], 27.0, 1e-10);

  auto g2 = grid(2, 1.0, 0.125, 1.0, 0.25);
  const auto w = ScalarField::sample(g2, [](const Point& x, double) { return std::sqrt(2.0) * (x[0] + x[1]); });
  const auto b2 = drift_from_solution(w, 0.5, 4.0);
  const int c = g2->nearest_node(Point::Zero());
  EXPECT_NEAR(b2.at(c, 0)[0], 16.0 / std::sqrt(2.0), 1e-10);
  EXPECT_NEAR(b2.at(c, 0)[1], 16.0 / std::sqrt(2.0), 1e-10);
}

TEST(FP, ConservesMassWithOutflux)
{
  auto g = grid(2, 1.0, 0.125, 0.5, 0.03125, true);
  VectorField b(g);
  for (int k = 0; k < g->level_count(); ++k)
    for (int n : g->active_nodes())
      b.set(n, k, Point(1.5, -0.5));
  const auto sol = solve_fp({0.7, b, Point(0.25, 0.0)});
  for (int k = 0; k < g->level_count(); ++k)
    EXPECT_NEAR(sol.mass[k] + sol.outflux[k], 1.0, 1e-10);
  EXPECT_GE(sol.m.values().minCoeff(), 0.0);
  EXPECT_LE(sol.max_conservation_error, 1e-10);
  EXPECT_GT(sol.outflux[g->level_count() - 1], 0.0);
}

TEST(FP, MatchesImageSeries)
{
  auto g = grid(1, 2.0, 0.0625, 0.5, 1.0 / 256);
  const auto sol = heat(g, 1.0, Point(0.5, 0));
  const int last = g->level_count() - 1;
  double num = 0, den = 0;
  for (int n : g->active_nodes()) {
    const double ref = oracle::box_heat_kernel(g->position(n), Point(0.5, 0), 0.5, 1.0, 2.0, 1);
    num += std::abs(sol.m(n, last) - ref);
    den += ref;
  }
  EXPECT_LT(num / den, 0.02);
}

TEST(FP, RejectsSourceNearBoundary)
{
  auto g = grid(1, 1.0, 0.125, 0.5, 0.125);
  EXPECT_THROW(heat(g, 1.0, Point(0.95, 0)), std::invalid_argument);
}

TEST(FP, KineticEnergy)
{
  auto g = grid(1, 2.0, 0.125, 0.5, 0.0625);
  EXPECT_EQ(kinetic_energy(heat(g), 1.5), 0.0);
  VectorField b(g);
  for (int k = 0; k < g->level_count(); ++k)
    for (int n : g->active_nodes())
      b.set(n, k, Point(k % 2 ? 1.0 : -1.0, 0.0));
  const auto sol = solve_fp({1.0, b, Point::Zero()});
  const Cylinder q = [&] {
    Cylinder c = Cylinder::of(*g);
    c.t0 = 0;
    c.t1 = g->horizon();
    return c;
  }();
  EXPECT_NEAR(kinetic_energy(sol, 1.5), integrate(sol.m, q), 1e-12);
}

TEST(FP, MomentVanishesForShortTimes)
{
  auto g = grid(1, 2.0, 0.0625, 0.5, 1.0 / 256);
  const auto sol = heat(g);
  const double early = moment_alpha(sol, 0.5, 1).moment;
  const double late = moment_alpha(sol, 0.5, g->level_count() - 1).moment;
  EXPECT_LT(early, late);
  EXPECT_EQ(moment_alpha(sol, 0.5, 0).moment, 0.0);
}

TEST(FP, OutfluxMonotoneInRadiusAndTime)
{
  double prev = INFINITY;
  for (double R : {2.0, 3.0, 4.0}) {
    const auto sol = heat(grid(1, R, 0.125, 1.0, 1.0 / 32));
    const double out = sol.outflux[sol.outflux.size() - 1];
    EXPECT_LT(out, prev);
    prev = out;
  }
  const auto sol = heat(grid(1, 2.0, 0.125, 1.0, 1.0 / 32));
  for (int k = 1; k < sol.outflux.size(); ++k)
    EXPECT_GE(sol.outflux[k], sol.outflux[k - 1]);
}

TEST(FP, BoundaryLossFittedConstantIsFinite)
{
  std::vector<double> C;
  for (double R : {4.0, 6.0, 8.0}) {
    const auto sol = heat(grid(1, R, 0.25, 4.0, 0.0625));
    const auto rep = boundary_loss_check(sol, 3.0);
    EXPECT_DOUBLE_EQ(rep.diffusion_term, 4.0 / (R * R));
    EXPECT_TRUE(std::isfinite(rep.fitted));
    C.push_back(rep.fitted);
  }
  EXPECT_LE(C[2], C[0]);
}

TEST(FP, DensityNormWithoutDrift)
{
  const auto sol = heat(grid(1, 4.0, 0.125, 1.0, 1.0 / 64));
  const auto rep = m_norm_bound_check(sol, 3.0);
  EXPECT_EQ(rep.kinetic, 0.0);
  EXPECT_NEAR(rep.diffusion_term, 1.0, 1e-15);
  EXPECT_NEAR(rep.exponent, 2.0, 1e-15);
  EXPECT_TRUE(std::isfinite(rep.fitted));
  EXPECT_THROW(m_norm_bound_check(heat(grid(1, 0.5, 0.0625, 1.0, 1.0 / 64)), 3.0), std::invalid_argument);
}

TEST(FP, GaussianMomentMatchesQuadrature)
{
  for (int dim : {1, 2, 3})
    for (double alpha : {0.25, 0.5, 0.9})
      EXPECT_NEAR(gaussian_moment(dim, 0.7, 2.0, alpha), oracle::gaussian_moment_quadrature(dim, 0.7, 2.0, alpha),
                  1e-8);
}
