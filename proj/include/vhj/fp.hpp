#pragma once

#include "vhj/grid.hpp"

namespace vhj {

/// d_s m - sigma Lap m - div(b m) = 0 on the grid cylinder, m(0) = Dirac at
/// `source`, m = 0 on the lateral boundary.
struct FPProblem
{
  double sigma = 1.0;
  VectorField drift;
  Point source = Point::Zero();
};

struct FPSolution
{
  ScalarField m;
  VectorField drift;
  double sigma = 1.0;
  int source_node = -1;
  Eigen::VectorXd mass;          ///< per level, sum of m dx^N
  Eigen::VectorXd outflux;       ///< per level, cumulative diffusive boundary flux
  Eigen::MatrixXd boundary_flux; ///< node x level: flux through the node's faces during the step ending there
  Eigen::VectorXi substeps;      ///< drift subcycles per step (entry 0 unused)
  double max_conservation_error = 0.0;

  const Grid& grid() const { return m.grid(); }
  double horizon() const { return m.grid().horizon(); }
};

/// Conservative scheme: explicit upwind drift (face-averaged b, subcycled under
/// dt <= dx / (2N max|b|)), then implicit diffusion with m = 0 on boundary nodes.
FPSolution solve_fp(const FPProblem& p);

/// b = h1 gamma |Dw|^{gamma-2} Dw with the central gradient; 0 where Dw = 0.
VectorField drift_from_solution(const ScalarField& w, double h1, double gamma);

/// iint |b|^gamma' m over (t_from, T).
double kinetic_energy(const FPSolution& sol, double gamma_prime, double t_from = 0.0);

/// iint |b| m over (0, t).
double drift_mass(const FPSolution& sol, double t);

struct MomentReport
{
  double moment = 0.0;         ///< int |x - x0|^alpha m(x, t) dx
  double drift_term = 0.0;     ///< (iint |b| m)^alpha
  double diffusion_term = 0.0; ///< (sigma t)^{alpha/2}
  double fitted = 0.0;         ///< moment / (drift_term + diffusion_term)
};

MomentReport moment_alpha(const FPSolution& sol, double alpha, int level);

struct BoundaryLossReport
{
  double outflux = 0.0;
  double kinetic = 0.0;
  double drift_term = 0.0;     ///< tau^{1/gamma} K^{1/gamma'} / R
  double diffusion_term = 0.0; ///< sigma tau / R^2
  double fitted = 0.0;
};

BoundaryLossReport boundary_loss_check(const FPSolution& sol, double gamma);

struct DensityNormReport
{
  double exponent = 0.0;        ///< q0'
  double norm = 0.0;            ///< ||m||_{q0'} over (t_from, tau)
  double norm_full = 0.0;       ///< same over (0, tau)
  double lhs = 0.0;             ///< sigma^{gamma'(N+1)/(N+2)} norm
  double kinetic = 0.0;         ///< K over (0, tau)
  double diffusion_term = 0.0;  ///< sigma^{gamma'/2} tau^{alpha0/2}
  double fitted = 0.0;
  bool initial_layer_dominates = false;
};

/// Rejects R^2 < tau sigma. t_from < 0 selects tau / 10.
DensityNormReport m_norm_bound_check(const FPSolution& sol, double gamma, double t_from = -1.0);

} // namespace vhj
