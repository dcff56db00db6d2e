#include "vhj/exponents.hpp"
#include "vhj/hj.hpp"

#include <gmock/gmock.h>
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

double max_error(const ScalarField& u, const ManufacturedSolution& exact)
{
  const Grid& g = u.grid();
  double err = 0.0;
  for (int k = 0; k < g.level_count(); ++k)
    for (int n : g.active_nodes())
      err = std::max(err, std::abs(u(n, k) - exact.value(g.position(n), g.time(k))));
  return err;
}

} // namespace

TEST(Exponents, Identities)
{
  EXPECT_DOUBLE_EQ(conjugate_exponent(3.0), 1.5);
  EXPECT_DOUBLE_EQ(critical_integrability(3.0, 1), 2.0);
  EXPECT_DOUBLE_EQ(critical_holder(3.0), 0.5);
  EXPECT_DOUBLE_EQ(holder_from_integrability(2.5, 1), 0.8);
  EXPECT_THROW(require_superquadratic(2.0), std::invalid_argument);
}

TEST(HJ, ConstantsSolveTheEquation)
{
  auto g = grid(2, 1.0, 0.125, 1.0, 0.125);
  HJProblem p;
  p.h = ScalarField::constant(g, 1.0);
  p.f = ScalarField::constant(g, 0.0);
  p.data = ScalarField::constant(g, 5.0);
  const auto sol = solve_hj(p);
  EXPECT_NEAR((sol.u.values().array() - 5.0).abs().maxCoeff(), 0.0, 1e-12);
}

TEST(HJ, ValidatesCoefficients)
{
  auto g = grid(1, 1.0, 0.125, 1.0, 0.125);
  HJProblem p;
  p.h = ScalarField::constant(g, 1.0);
  p.f = ScalarField::constant(g, 0.0);
  p.data = ScalarField::constant(g, 0.0);
  p.gamma = 2.0;
  EXPECT_THROW(solve_hj(p), std::invalid_argument);
  p.gamma = 3.0;
  p.h = ScalarField::constant(g, 2.0);
  EXPECT_THROW(solve_hj(p), std::invalid_argument);
}

TEST(HJ, ManufacturedRightHandSides)
{
  auto g = grid(1, 1.0, 0.125, 1.0, 0.125);
  const auto c = manufactured_problem(ManufacturedSolution::constant(2.0), g, 3.0, 1.0, 1.0);
  EXPECT_EQ(c.f.values().cwiseAbs().maxCoeff(), 0.0);
  const auto l = manufactured_problem(ManufacturedSolution::linear_in_time(0.7, 1.0), g, 3.0, 1.0, 1.0);
  for (int k = 0; k < g->level_count(); ++k)
    for (int n : g->active_nodes())
      EXPECT_NEAR(l.f(n, k), 0.7, 1e-15);
}

TEST(HJ, LinearInTimeIsReproduced)
{
  auto g = grid(1, 1.0, 0.0625, 1.0, 0.03125);
  const auto exact = ManufacturedSolution::linear_in_time(0.7, 1.0);
  EXPECT_LT(max_error(solve_hj(manufactured_problem(exact, g, 3.0, 1.0, 1.0)).u, exact), 1e-10);
}

TEST(HJ, FirstOrderConvergence)
{
  const auto exact = ManufacturedSolution::separable_sine(1.0, std::numbers::pi, 0.0, 1.0);
  const double e1 = max_error(solve_hj(manufactured_problem(exact, grid(1, 1.0, 1.0 / 32, 1.0, 1.0 / 128), 3.0, 1.0, 1.0)).u, exact);
  const double e2 = max_error(solve_hj(manufactured_problem(exact, grid(1, 1.0, 1.0 / 64, 1.0, 1.0 / 256), 3.0, 1.0, 1.0)).u, exact);
  EXPECT_GT(std::log2(e1 / e2), 0.9);
}

TEST(HJ, TwoDimensionalManufactured)
{
  const auto exact = ManufacturedSolution::separable_sine(0.5, std::numbers::pi / 2, 0.3, 1.0);
  const auto sol = solve_hj(manufactured_problem(exact, grid(2, 1.0, 0.0625, 1.0, 1.0 / 64), 3.0, 0.5, 1.0));
  EXPECT_LT(max_error(sol.u, exact), 0.05);
  EXPECT_FALSE(sol.log.empty());
}

TEST(HJ, InequalitySlacks)
{
  auto g = grid(1, 1.0, 0.0625, 1.0, 1.0 / 64);
  const auto zero = ScalarField::constant(g, 0.0);
  const auto s0 = differential_inequality_check(ScalarField::constant(g, 3.0), zero, 1.0, 1.0, 2.0, 3.0);
  EXPECT_EQ(s0.lower, 0.0);
  EXPECT_EQ(s0.upper, 0.0);

  const auto exact = ManufacturedSolution::separable_sine(0.25, std::numbers::pi / 2, 0.5, 1.0);
  HJProblem p = manufactured_problem(exact, g, 3.0, 1.0, 1.0);
  p.h0 = 0.5;
  p.h1 = 1.5;
  p.h = ScalarField::sample(g, [](const Point& x, double t) { return 1.0 + 0.5 * std::sin(3 * x[0] + t); });
  p.f = manufactured_rhs(exact, p);
  const auto sol = solve_hj(p);
  const auto s = differential_inequality_check(sol.u, p.f, 1.0, 0.5, 1.5, 3.0);
  EXPECT_GE(s.lower, -5 * g->dx());
  EXPECT_GE(s.upper, -5 * g->dx());
}

TEST(HJ, LegendreDuality)
{
  EXPECT_NEAR(legendre_sup(lagrangian_coefficient(1.0, 3.0), 1.5, Eigen::VectorXd::Zero(2)), 0.0, 1e-15);
  std::vector<Eigen::VectorXd> ps;
  for (int i = 0; i < 6; ++i) {
    Eigen::VectorXd p(1 + i % 3);
    p.setConstant(1.0);
    p *= 0.5 / p.norm();
    ps.push_back(p);
  }
  EXPECT_LT(legendre_gap(2.0, 3.0, ps), 1e-6);
}

TEST(HJ, ManufacturedByName)
{
  EXPECT_NO_THROW(ManufacturedSolution::by_name("sine", 1.0));
  try {
    ManufacturedSolution::by_name("cubic", 1.0);
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_THAT(e.what(), testing::HasSubstr("cubic"));
  }
}
