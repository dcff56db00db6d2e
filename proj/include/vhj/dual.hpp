#pragma once

#include "vhj/fp.hpp"
#include "vhj/grid.hpp"

#include <cstdint>

namespace vhj {

/// w(x0,0) against the four terms of the representation formula obtained by
/// testing the HJ equation with the Fokker-Planck density.
struct DualityReport
{
  double lhs = 0.0;          ///< w(x0, 0)
  double lagrangian = 0.0;   ///< iint (h1 gamma - h) |Dw|^gamma m  (= ell1 iint |b|^gamma' m when h = h1)
  double running_cost = 0.0; ///< iint f m
  double terminal = 0.0;     ///< int w(tau) m(tau)
  double boundary = 0.0;     ///< -sigma iint w Dm.nu, from the recorded boundary flux
  double residual = 0.0;     ///< lhs - rhs()
  double ell0 = 0.0;
  double ell1 = 0.0;

  double rhs() const { return lagrangian + running_cost + terminal + boundary; }
};

/// `sol` must come from solve_fp with drift_from_solution(w, h1, gamma) on w's grid.
DualityReport duality_identity(const ScalarField& w, const ScalarField& f, const ScalarField& h,
                               const FPSolution& sol, double gamma, double h0, double h1);

struct BentDualityReport
{
  double lhs = 0.0;          ///< w(x0 + y0, 0)
  double lagrangian = 0.0;   ///< ell0 iint |b + y0/tau|^gamma' m
  double running_cost = 0.0; ///< iint g(y + xi_s, s) m
  double terminal = 0.0;     ///< int w(y, tau) m(y, tau)
  double boundary = 0.0;     ///< sum of flux * w(y + xi_s, s)
  double slack = 0.0;        ///< rhs - lhs, expected >= -O(dx + dt)

  double rhs() const { return lagrangian + running_cost + terminal + boundary; }
};

/// Bent-trajectory upper bound with xi_s = ((tau - s)/tau) y0. w and g live on
/// a padded grid covering the solution grid shifted by y0; shifted values are
/// interpolated multilinearly.
BentDualityReport bent_duality(const ScalarField& w_padded, const ScalarField& g_padded, const FPSolution& sol,
                               const Point& y0, double gamma, double ell0);

struct OscillationInputs
{
  double sigma = 1.0;
  double h0 = 1.0;
  double h1 = 1.0;
  double gamma = 3.0;
  double alpha = 0.5;
  double z = 1.0;
  double R = 1.0;
  double tau = 1.0;
  Point y0 = Point::UnitX();
  double f0 = 1.0; ///< threshold for the rescaled g-norm condition
  double c1 = 1.0; ///< threshold for the shape condition
};

struct OscillationBudget
{
  double fnorm = 0.0; ///< sigma^{-gamma'(N+1)/(N+2)} ||g||_{q0, Q_{R,tau}}
  bool fnorm_ok = false;
  double shape = 0.0; ///< z (R^alpha + tau^{alpha/2}) / R
  bool shape_ok = false;
  bool parabolic_ok = false; ///< R^2 >= sigma tau
  double space_quotient = 0.0;
  double time_quotient = 0.0;
  double K = 0.0;
  double g_norm_padded = 0.0; ///< ||g||_{q0, Q_{R+1,tau}}
  double ell0 = 0.0;
  double ell1 = 0.0;
  double test0_lhs = 0.0;
  double test0_rhs = 0.0; ///< budget without C2
  double xest0_lhs = 0.0;
  double xest0_rhs = 0.0; ///< budget without C3
  double C2 = 0.0;
  double C3 = 0.0;
};

/// Time and space oscillation of w against the two budgets. w and g are given
/// on B_{R+1} x (0, tau); the dual problem is solved on B_R x (0, tau) with the
/// same steps. Rejects inputs violating the growth normalization.
OscillationBudget oscillation_report(const ScalarField& w_padded, const ScalarField& g_padded,
                                     const OscillationInputs& in);

/// The test0 budget tau^{a/2} + tau^{a0/2} + tau^{a/(gamma - a(gamma-1))} + tau z (R^a + tau^{a/2}) / R.
double test0_budget(double tau, double R, double z, double alpha, double gamma);

struct ExitMeasureReport
{
  double moment = 0.0;          ///< int |y|^alpha mu(tau)
  double density_norm = 0.0;    ///< ||mu||_{q0'} over (0, tau)
  double outflux = 0.0;
  double gaussian_moment = 0.0; ///< free-space value (4 sigma tau)^{alpha/2} Gamma((N+alpha)/2) / Gamma(N/2)
  double max_conservation_error = 0.0;
};

/// Driftless dual problem on `spec` (R = half width, tau = horizon).
ExitMeasureReport exit_measure_report(const GridSpec& spec, double sigma, double alpha, double gamma);

/// E|Y|^alpha for Y ~ N(0, 2 sigma tau I_N).
double gaussian_moment(int dim, double sigma, double tau, double alpha);

/// max over seeded samples of (|z+x|^g - |z|^g) / (|z|^{g-1}|x| + |x|^g).
double ldiff_constant(double gamma_prime, std::int64_t samples, std::uint64_t seed);

/// Single ratio, evaluated stably for |x| << |z|.
double ldiff_ratio(const Eigen::VectorXd& zeta, const Eigen::VectorXd& xi, double gamma_prime);

/// max(g 2^{g-1}, g(g-1) + g).
double ldiff_cap(double gamma_prime);

} // namespace vhj
