#include "vhj/exponents.hpp"
#include "vhj/hj.hpp"
#include "vhj/quadrature.hpp"
#include "vhj/scalelab.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

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

} // namespace

TEST(Blowup, UnitParametersAreTheIdentity)
{
  auto g = grid(1, 1.0, 0.0625, 1.0, 1.0 / 64);
  const auto exact = ManufacturedSolution::separable_sine(1.0, std::numbers::pi, 0.0, 1.0);
  const auto p = manufactured_problem(exact, g, 3.0, 1.0, 1.0);
  const auto sol = solve_hj(p);
  BlowupParams id;
  const auto b = blowup_transform(sol.u, p.f, p.h, id, g);
  EXPECT_EQ((b.w.values() - sol.u.values()).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ((b.g.values() - p.f.values()).cwiseAbs().maxCoeff(), 0.0);
  const auto r0 = equation_residual(sol.u, p.h, p.f, 1.0, 3.0);
  EXPECT_EQ((rescaled_residual(b, 3.0).values() - r0.values()).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Blowup, ConstantHasZeroResidual)
{
  auto g = grid(1, 1.0, 0.0625, 1.0, 1.0 / 64);
  BlowupParams p;
  p.M = 2.0;
  p.r = 0.5;
  const auto b = blowup_transform(ScalarField::constant(g, 3.0), ScalarField::constant(g, 0.0),
                                  ScalarField::constant(g, 1.0), p, grid(1, 1.0, 0.125, 1.0, 0.25));
  EXPECT_EQ(rescaled_residual(b, 3.0).values().cwiseAbs().maxCoeff(), 0.0);
}

TEST(Blowup, RejectsTargetsOutsideTheSource)
{
  auto g = grid(1, 1.0, 0.0625, 1.0, 1.0 / 64);
  BlowupParams p;
  p.r = 2.0;
  const auto z = ScalarField::constant(g, 0.0);
  EXPECT_THROW(blowup_transform(z, z, z, p, grid(1, 1.0, 0.25, 0.5, 0.25)), std::out_of_range);
}

TEST(Blowup, RoundTripOnAlignedParameters)
{
  auto g = grid(1, 2.0, 1.0 / 16, 1.0, 1.0 / 64);
  const auto u = ScalarField::sample(g, [](const Point& x, double t) { return std::cos(2 * x[0]) + t; });
  BlowupParams p;
  p.variant = BlowupVariant::alpha;
  p.M = 3.0;
  p.r = 0.25;
  const auto b = blowup_transform(u, ScalarField(g), ScalarField::constant(g, 1.0), p, grid(1, 2.0, 0.25, 2.0, 0.25));
  auto back_grid = grid(1, 0.5, 1.0 / 16, 0.125, 1.0 / 64);
  const auto back = inverse_blowup(b.w, p, back_grid);
  for (int k = 0; k < back_grid->level_count(); ++k)
    for (int n : back_grid->active_nodes())
      EXPECT_NEAR(back(n, k), interpolate(u, back_grid->position(n), back_grid->time(k)), 1e-12);
}

TEST(Blowup, NormIdentityForCriticalExponent)
{
  auto g = grid(1, 1.0, 1.0 / 32, 1.0, 1.0 / 64);
  BlowupParams p;
  p.M = 2.0;
  p.r = 0.5;
  const auto f = ScalarField::constant(g, 1.5);
  const auto b = blowup_transform(ScalarField(g), f, ScalarField::constant(g, 1.0), p, grid(1, 1.0, 1.0 / 16, 2.0, 0.25));
  EXPECT_NEAR(b.g_norm, b.norm_factor * b.f_norm, 1e-10 * b.g_norm);
}

TEST(Selection, CraftedSpacePair)
{
  auto g = grid(1, 1.0, 0.25, 1.0, 0.5);
  ScalarField u(g);
  u(g->nearest_node(Point(0.25, 0)), 0) = 1.0;
  const auto q = Cylinder::box(Point(-1, 0), Point(1, 0), 0.0, 1.0);
  const auto p = worst_pair_selection(u, SelectionKind::nonlinear, 0.5, 1.0, 3.0, q);
  EXPECT_EQ(p.selection_case, 'a');
  EXPECT_EQ(p.M, 1.0);
  EXPECT_EQ(p.tbar, 0.0);
  EXPECT_EQ(p.quotient, 2 * p.L);
  EXPECT_NEAR(normalization_check(u, p), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(p.y0[0]), 1.0, 1e-15);
}

TEST(Selection, TimePairNormalizesToZ)
{
  auto g = grid(1, 1.0, 0.125, 1.0, 1.0 / 32);
  const auto u = ScalarField::sample(g, [](const Point&, double t) { return std::sin(2 * t); });
  const double z = 1.7;
  const auto p = worst_pair_selection(u, SelectionKind::nonlinear, critical_holder(3.0), z, 3.0, Cylinder::of(*g));
  EXPECT_EQ(p.selection_case, 'b');
  EXPECT_NEAR(normalization_check(u, p), z, 1e-12);
  EXPECT_LE(p.L, p.quotient);
  EXPECT_LE(p.quotient, 2 * p.L);
  EXPECT_NEAR(p.scaled_form, p.quotient, 1e-12 * p.quotient);
}

TEST(Selection, ConstantFieldHasNoWorstPair)
{
  auto g = grid(1, 1.0, 0.125, 1.0, 0.125);
  EXPECT_THROW(worst_pair_selection(ScalarField::constant(g, 1.0), SelectionKind::nonlinear, 0.5, 1.0, 3.0,
                                    Cylinder::of(*g)),
               std::invalid_argument);
}

TEST(Liouville, BudgetDecreases)
{
  for (double a : {0.2, 0.6})
    for (double g : {2.5, 5.0})
      EXPECT_GT(liouville_budget(4, a, g), liouville_budget(16, a, g));
}

TEST(Maxreg, ConstantFamilyIsFlatInEpsilon)
{
  MaxregConfig c;
  c.constant_family = true;
  c.q_list = {2.4};
  c.dx_list = {1.0 / 32};
  const auto rows = maxreg_sweep(c);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].ratio, rows[1].ratio);
  EXPECT_EQ(rows[1].ratio, rows[2].ratio);
}

TEST(Maxreg, RowCountIsTheProduct)
{
  MaxregConfig c;
  c.q_list = {1.6, 2.0, 2.4};
  c.dx_list = {1.0 / 32};
  EXPECT_EQ(maxreg_sweep(c).size(), 9u);
}

TEST(Interpolation, ZeroFieldAndExponentRange)
{
  auto g = grid(1, 2.0, 0.0625, 4.0, 1.0 / 32);
  const auto zero = ScalarField::constant(g, 0.0);
  const auto rep = interpolation_bound_check(zero, zero, 2.5, 3.0, 1.0);
  EXPECT_EQ(rep.K, 0.0);
  EXPECT_NEAR(rep.alpha, 0.8, 1e-15);
  EXPECT_THROW(interpolation_bound_check(zero, zero, 3.0, 3.0, 1.0), std::invalid_argument);
}
