#pragma once

#include "vhj/exponents.hpp"
#include "vhj/grid.hpp"

#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace vhj {

/// -d_t u - sigma Lap u + h |Du|^gamma = f on the grid cylinder, with Dirichlet
/// data on the terminal level t = T and on boundary nodes at every level.
struct HJProblem
{
  double gamma = 3.0;
  double sigma = 1.0;
  double h0 = 1.0;
  double h1 = 1.0;
  ScalarField h;    ///< coefficient, h0 <= h <= h1
  ScalarField f;    ///< right-hand side
  ScalarField data; ///< terminal level and boundary-node values are used
  double q = std::numeric_limits<double>::infinity(); ///< integrability of f (reporting only)
  double gradient_bound = 0.0; ///< initial CFL gradient estimate; 0 = from the data

  double gamma_prime() const { return conjugate_exponent(gamma); }
  double q0() const { return critical_integrability(gamma, h.grid().dim()); }
  double alpha0() const { return critical_holder(gamma); }

  /// Throws std::invalid_argument naming the violated invariant.
  void validate() const;
};

struct StepRecord
{
  int level = 0;
  double t = 0.0;
  int substeps = 1;
  double gradient_bound = 0.0;  ///< P used for the CFL restriction
  double linear_residual = 0.0; ///< relative residual of the last linear solve
  double max_residual = 0.0;    ///< max |discrete equation residual| on the level
};

struct HJSolution
{
  ScalarField u;
  ScalarField residual;
  std::vector<StepRecord> log;
};

/// Backward marching in s = T - t: implicit diffusion, explicit Godunov
/// Hamiltonian, substeps doubled until the explicit part is monotone.
HJSolution solve_hj(const HJProblem& p);

/// Discrete equation residual, level k coupled to level k+1:
/// (u^k - u^{k+1})/dt - sigma Lap u^k + h^k G(u^{k+1})^gamma - f^k at interior
/// nodes; zero on boundary nodes and on the terminal level.
ScalarField equation_residual(const ScalarField& u, const ScalarField& h, const ScalarField& f, double sigma,
                              double gamma);

struct InequalitySlack
{
  double lower = 0.0; ///< min of g - [-d_s w - sigma Lap w + h0 |Dw|^gamma]
  double upper = 0.0; ///< min of [-d_s w - sigma Lap w + h1 |Dw|^gamma] - g
  int lower_node = -1, lower_level = -1;
  int upper_node = -1, upper_level = -1;
};

/// Certifies the pair of differential inequalities with constant coefficients
/// h0 and h1, using the same discrete operator as equation_residual.
InequalitySlack differential_inequality_check(const ScalarField& w, const ScalarField& g, double sigma, double h0,
                                              double h1, double gamma);

/// Closed-form test function with analytic derivatives.
struct ManufacturedSolution
{
  std::string name;
  std::function<double(const Point&, double)> value;
  std::function<double(const Point&, double)> time_derivative;
  std::function<Point(const Point&, double)> gradient;
  std::function<double(const Point&, double)> laplacian;

  static ManufacturedSolution constant(double c);
  /// c (T - t)
  static ManufacturedSolution linear_in_time(double c, double horizon);
  /// A sin(k x1 + phase) (T - t)
  static ManufacturedSolution separable_sine(double amplitude, double wavenumber, double phase, double horizon);
  /// Looks up "constant", "linear", "sine" with the standard parameters.
  static ManufacturedSolution by_name(const std::string& name, double horizon);
};

/// f = -d_t u* - sigma Lap u* + h |Du*|^gamma sampled on p.h's grid.
ScalarField manufactured_rhs(const ManufacturedSolution& sol, const HJProblem& p);

/// Problem whose exact solution is `sol`: data sampled from it, f from
/// manufactured_rhs, h constant.
HJProblem manufactured_problem(const ManufacturedSolution& sol, GridPtr grid, double gamma, double sigma, double h);

/// max over samples p of |sup_q {p.q - ell |q|^gamma'} - h |p|^gamma|, the sup
/// found numerically (coarse grid then compass refinement).
double legendre_gap(double h, double gamma, const std::vector<Eigen::VectorXd>& p_samples);

/// Numerical sup_q {p.q - ell |q|^gamma'}.
double legendre_sup(double ell, double gamma_prime, const Eigen::VectorXd& p);

} // namespace vhj
