#pragma once

#include "vhj/grid.hpp"
#include "vhj/seminorm.hpp"

#include <string>
#include <vector>

namespace vhj {

enum class BlowupVariant
{
  alpha0, ///< time scale r^gamma / M^{gamma-1}, diffusion sigma_n = r^{gamma-2}/M^{gamma-1}
  alpha   ///< time scale r^2, Hamiltonian factor theta_n = M^{gamma-1}/r^{gamma-2}
};

struct BlowupParams
{
  BlowupVariant variant = BlowupVariant::alpha0;
  Point xbar = Point::Zero();
  double tbar = 0.0;
  double M = 1.0;
  double r = 1.0;
  double gamma = 3.0;
  double z = 1.0;
  double d = 0.0; ///< distance d_n of the base point

  /// Populated by worst_pair_selection.
  char selection_case = '-'; ///< 'a' same time, 'b' same position, 'c' weighted classical
  Point y0 = Point::Zero();
  double s0 = 0.0;
  double L = 0.0;            ///< half the seminorm
  double quotient = 0.0;     ///< the defining quotient of the selected pair
  double scaled_form = 0.0;  ///< the same quotient written through (d, M, r)

  double time_scale() const;
  double sigma_n() const; ///< 0 for variant alpha
  double theta_n() const; ///< 0 for variant alpha0
  /// Factor multiplying f in g_n.
  double source_factor() const;
  Point to_original(const Point& y) const { return xbar + r * y; }
  double to_original_time(double s) const { return tbar + time_scale() * s; }
};

/// Lazy view of w(y,s) = u(xbar + r y, tbar + lambda s)/M by multilinear interpolation.
class BlowupMap
{
public:
  BlowupMap(const ScalarField& u, const BlowupParams& p)
    : u_(u)
    , p_(p)
  {
  }
  double operator()(const Point& y, double s) const;

private:
  const ScalarField& u_;
  BlowupParams p_;
};

struct BlowupResult
{
  BlowupParams params;
  ScalarField w;
  ScalarField g;
  ScalarField h; ///< h(xbar + r y, tbar + lambda s)
  double sigma = 1.0; ///< diffusion of the rescaled equation
  double theta = 1.0; ///< factor in front of h
  double g_norm = 0.0;        ///< ||g_n||_q on the target box
  double f_norm = 0.0;        ///< ||f||_q on the preimage box
  double norm_factor = 0.0;   ///< predicted ratio: sigma_n^{gamma'(N+1)/(N+2)} or r^{2-(N+2)/q}/M
  double norm_exponent_q = 0.0;
};

/// Samples the rescaled w, g_n and h on `target`. Rejects targets whose
/// preimage leaves u's grid, naming the first offending node. q <= 0 selects q0.
BlowupResult blowup_transform(const ScalarField& u, const ScalarField& f, const ScalarField& h,
                              const BlowupParams& p, GridPtr target, double q = 0.0);

/// u(x, t) = M w((x - xbar)/r, (t - tbar)/lambda) sampled on `target`.
ScalarField inverse_blowup(const ScalarField& w, const BlowupParams& p, GridPtr target);

/// Interior residual of the rescaled equation, using the solver's discrete operator.
ScalarField rescaled_residual(const BlowupResult& b, double gamma);

/// Normalization value: |w(y0,0) - w(0,0)| (case a), |w(0,1) - w(0,0)| (case b),
/// |w(y0,s0) - w(0,0)| (weighted classical), evaluated through the lazy map.
double normalization_check(const ScalarField& u, const BlowupParams& p);

enum class SelectionKind
{
  nonlinear,         ///< combined nonlinear seminorm, variant alpha0
  weighted_classical ///< [u]^{alpha - alpha0}_alpha, variant alpha
};

/// Derives the blow-up parameters from the argmax pair of the chosen seminorm.
BlowupParams worst_pair_selection(const ScalarField& u, SelectionKind kind, double alpha, double z, double gamma,
                                  const Cylinder& q, const SeminormOptions& opts = {});

/// ((tau^{a/2} + tau^{a0/2} + tau^{a/(gamma - a(gamma-1))}) / tau)^{1/gamma} + tau^{-(gamma'-1)}.
double liouville_budget(double tau, double alpha, double gamma);

struct LiouvilleConfig
{
  int dim = 1;
  double h = 1.0;
  double gamma = 3.0;
  double alpha = 0.5;
  double z = 1.0;
  double amplitude = 1.0;
  double dx = 0.125;
  double dt = 0.125;
  std::vector<double> R_list{8.0};
  std::vector<double> tau_list{4.0, 16.0, 64.0};
};

struct LiouvilleRow
{
  double R = 0.0;
  double tau = 0.0;
  double budget = 0.0;      ///< closed form after R -> infinity
  double oscillation = 0.0; ///< max - min of v(., 0) on B_1
  double xest0_lhs = 0.0;
  double xest0_rhs = 0.0;
  double C3 = 0.0;
  double K = 0.0;
  std::string status = "ok";
};

/// Solves the g = 0 problem on B_{R+1} x (0, tau) with sine terminal data and
/// zero lateral data, then runs the oscillation report for every (R, tau).
std::vector<LiouvilleRow> liouville_probe(const LiouvilleConfig& c);

struct MaxregConfig
{
  int dim = 1;
  double gamma = 3.0;
  double R = 1.0;
  double T = 1.0;
  double t_singular = 0.5;
  double dt_factor = 4.0; ///< dt = dt_factor dx^2
  bool constant_family = false;
  std::vector<double> q_list{1.6, 2.4};
  std::vector<double> eps_list{0.25, 0.125, 0.0625};
  std::vector<double> dx_list{1.0 / 64, 1.0 / 128};
  Cylinder sub = Cylinder::box(Point(-0.5, -0.5), Point(0.5, 0.5), 0.25, 0.75);
};

struct MaxregRow
{
  double q = 0.0;
  double eps = 0.0;
  double dx = 0.0;
  double f_norm = 0.0;
  double dtu = 0.0;
  double hessian = 0.0;
  double gradient_power = 0.0;
  double ratio = 0.0;
  std::string status = "ok"; ///< ok | growth | failed
};

/// Truncated power family f = c min(rho^{-beta}, eps^{-beta}), rho the parabolic
/// distance to (0, t_singular), beta = 0.95 (N+2)/q, ||f||_q = 1. Rows ordered by
/// q, dx, eps.
std::vector<MaxregRow> maxreg_sweep(const MaxregConfig& c);

struct InterpolationBoundReport
{
  double alpha = 0.0;
  double c1 = 0.0; ///< ||g||_{q, Q_2R} + [v]_{alpha, Q_2R}
  double c2 = 0.0; ///< smallest c2 with |-v_t - Lap v| <= c2 |Dv|^gamma + g
  double dtv = 0.0;
  double hessian = 0.0;
  double K = 0.0; ///< ||d_t v||_q + ||D^2 v||_q on the inner cylinder
};

/// v and g on a grid covering B_{2R} x (0, 4R^2).
InterpolationBoundReport interpolation_bound_check(const ScalarField& v, const ScalarField& g, double q, double gamma,
                                                   double R);

} // namespace vhj
