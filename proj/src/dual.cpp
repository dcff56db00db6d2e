#include "vhj/dual.hpp"

#include "vhj/calculus.hpp"
#include "vhj/exponents.hpp"
#include "vhj/quadrature.hpp"
#include "vhj/seminorm.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace vhj {

namespace {

void require_same_grid(const Grid& a, const Grid& b, const char* what)
{
  if (!(a.spec() == b.spec()))
    throw std::invalid_argument(std::string(what) + ": grids do not match (" + a.spec().to_string() + " vs " +
                                b.spec().to_string() + ")");
}

double cylinder_integral(const Grid& grid, const Eigen::MatrixXd& values)
{
  return integrate(grid, values, Cylinder::of(grid));
}

} // namespace

DualityReport duality_identity(const ScalarField& w, const ScalarField& f, const ScalarField& h,
                               const FPSolution& sol, double gamma, double h0, double h1)
{
  require_superquadratic(gamma);
  const Grid& grid = sol.grid();
  require_same_grid(w.grid(), grid, "duality_identity");
  require_same_grid(f.grid(), grid, "duality_identity");
  require_same_grid(h.grid(), grid, "duality_identity");

  DualityReport r;
  r.ell0 = lagrangian_coefficient(h0, gamma);
  r.ell1 = lagrangian_coefficient(h1, gamma);
  r.lhs = w(sol.source_node, 0);

  const int levels = grid.level_count();
  Eigen::MatrixXd lag = Eigen::MatrixXd::Zero(grid.node_count(), levels);
  for (int k = 0; k < levels; ++k) {
    const Eigen::Matrix2Xd g = gradient_central(grid, w.level(k));
    for (int node : grid.active_nodes())
      lag(node, k) = (h1 * gamma - h(node, k)) * std::pow(g.col(node).norm(), gamma) * sol.m(node, k);
  }
  r.lagrangian = cylinder_integral(grid, lag);
  r.running_cost = cylinder_integral(grid, (f.values().array() * sol.m.values().array()).matrix());
  r.terminal = integrate_level(grid, (w.level(levels - 1).array() * sol.m.level(levels - 1).array()).matrix(),
                               Cylinder::of(grid));
  r.boundary = (sol.boundary_flux.array() * w.values().array()).sum();
  r.residual = r.lhs - r.rhs();
  return r;
}

BentDualityReport bent_duality(const ScalarField& w_padded, const ScalarField& g_padded, const FPSolution& sol,
                               const Point& y0, double gamma, double ell0)
{
  require_superquadratic(gamma);
  const Grid& grid = sol.grid();
  const Grid& pad = w_padded.grid();
  require_same_grid(w_padded.grid(), g_padded.grid(), "bent_duality");
  if (y0.norm() > 1.0 + 1e-12)
    throw std::invalid_argument("bent_duality requires |y0| <= 1");
  if (pad.dim() != grid.dim() || pad.dx() != grid.dx() || pad.dt() != grid.dt() || pad.horizon() != grid.horizon())
    throw std::invalid_argument("padded grid must share dimension, steps and horizon with the dual grid");
  if (pad.half_width() < grid.half_width() + y0.norm() - 1e-12)
    throw std::invalid_argument("padded grid does not cover the shift by y0");

  const double tau = grid.horizon();
  const double gp = conjugate_exponent(gamma);
  const int levels = grid.level_count();
  const Point x0 = grid.position(sol.source_node);
  auto xi = [&](double s) -> Point { return (tau - s) / tau * y0; };

  BentDualityReport r;
  r.lhs = interpolate(w_padded, x0 + y0, 0.0);

  Eigen::MatrixXd lag = Eigen::MatrixXd::Zero(grid.node_count(), levels);
  Eigen::MatrixXd run = lag;
  for (int k = 0; k < levels; ++k) {
    const double s = grid.time(k);
    for (int node : grid.active_nodes()) {
      const double mk = sol.m(node, k);
      if (mk == 0.0)
        continue;
      const Point bent = sol.drift.at(node, k) + y0 / tau;
      lag(node, k) = std::pow(bent.norm(), gp) * mk;
      run(node, k) = interpolate(g_padded, grid.position(node) + xi(s), s) * mk;
    }
  }
  r.lagrangian = ell0 * cylinder_integral(grid, lag);
  r.running_cost = cylinder_integral(grid, run);

  Eigen::VectorXd term = Eigen::VectorXd::Zero(grid.node_count());
  for (int node : grid.active_nodes())
    if (sol.m(node, levels - 1) != 0.0)
      term[node] = interpolate(w_padded, grid.position(node), tau) * sol.m(node, levels - 1);
  r.terminal = integrate_level(grid, term, Cylinder::of(grid));

  for (int k = 1; k < levels; ++k)
    for (int node : grid.boundary_nodes()) {
      const double flux = sol.boundary_flux(node, k);
      if (flux != 0.0)
        r.boundary += flux * interpolate(w_padded, grid.position(node) + xi(grid.time(k)), grid.time(k));
    }
  r.slack = r.rhs() - r.lhs;
  return r;
}

double test0_budget(double tau, double R, double z, double alpha, double gamma)
{
  const double a0 = critical_holder(gamma);
  return std::pow(tau, alpha / 2) + std::pow(tau, a0 / 2) + std::pow(tau, alpha / (gamma - alpha * (gamma - 1))) +
         tau * (std::pow(R, alpha) + std::pow(tau, alpha / 2)) / R * z;
}

OscillationBudget oscillation_report(const ScalarField& w_padded, const ScalarField& g_padded,
                                     const OscillationInputs& in)
{
  require_superquadratic(in.gamma);
  if (!(in.alpha > 0.0 && in.alpha < 1.0))
    throw std::invalid_argument("alpha must lie in (0, 1)");
  if (!(in.z >= 1.0))
    throw std::invalid_argument("z must be at least 1");
  if (!(in.sigma > 0.0))
    throw std::invalid_argument("sigma must be positive");
  if (!(in.h1 >= in.h0 && in.h0 > 0.0))
    throw std::invalid_argument("need 0 < h0 <= h1");
  if (in.y0.norm() > 1.0 + 1e-12)
    throw std::invalid_argument("y0 must satisfy |y0| <= 1");
  require_same_grid(w_padded.grid(), g_padded.grid(), "oscillation_report");
  const Grid& pad = w_padded.grid();
  if (pad.half_width() < in.R + 1.0 - 1e-12)
    throw std::invalid_argument("w must be given on B_{R+1}");
  if (std::abs(pad.horizon() - in.tau) > 1e-12 * in.tau)
    throw std::invalid_argument("w must be given on (0, tau)");

  GridSpec inner_spec = pad.spec();
  inner_spec.half_width = in.R;
  const GridPtr inner = make_grid(inner_spec);
  const ScalarField w = resample(w_padded, inner);
  const ScalarField g = resample(g_padded, inner);
  const int dim = inner->dim();
  const double gp = conjugate_exponent(in.gamma);
  const double q0 = critical_integrability(in.gamma, dim);
  const double a0 = critical_holder(in.gamma);
  const double sigma_power = std::pow(in.sigma, -rescaled_norm_exponent(in.gamma, dim));

  OscillationBudget o;
  const Cylinder whole = Cylinder::of(*inner);
  o.space_quotient = space_quotient(w, in.alpha, whole).value;
  o.time_quotient = time_quotient(w, in.alpha, whole).value;
  const double space_cap = 3.0;
  const double time_cap = std::pow(3.0, in.gamma / 2) * in.z;
  if (o.space_quotient > space_cap * (1 + 1e-12) || o.time_quotient > time_cap * (1 + 1e-12)) {
    std::ostringstream os;
    os.precision(17);
    os << "growth normalization violated: space quotient " << o.space_quotient << " (cap 3), time quotient "
       << o.time_quotient << " (cap " << time_cap << ")";
    throw std::invalid_argument(os.str());
  }

  o.fnorm = sigma_power * lq_norm(g, q0, whole);
  o.fnorm_ok = o.fnorm <= in.f0;
  o.shape = in.z * (std::pow(in.R, in.alpha) + std::pow(in.tau, in.alpha / 2)) / in.R;
  o.shape_ok = o.shape <= in.c1;
  o.parabolic_ok = in.R * in.R >= in.sigma * in.tau;
  o.g_norm_padded = lq_norm(g_padded, q0, Cylinder::of(pad));
  o.ell0 = lagrangian_coefficient(in.h0, in.gamma);
  o.ell1 = lagrangian_coefficient(in.h1, in.gamma);

  FPProblem fp;
  fp.sigma = in.sigma;
  fp.drift = drift_from_solution(w, in.h1, in.gamma);
  fp.source = Point::Zero();
  const FPSolution sol = solve_fp(fp);
  o.K = kinetic_energy(sol, gp);

  const int origin = sol.source_node;
  const int last = inner->level_count() - 1;
  o.test0_lhs = std::abs(w(origin, 0) - w(origin, last)) + o.K;
  o.test0_rhs = test0_budget(in.tau, in.R, in.z, in.alpha, in.gamma);

  o.xest0_lhs = interpolate(w_padded, in.y0, 0.0) - interpolate(w_padded, Point::Zero(), 0.0);
  o.xest0_rhs = std::pow(o.K, 1.0 / in.gamma) / std::pow(in.tau, 1.0 / in.gamma) + 1.0 / std::pow(in.tau, gp - 1) +
                sigma_power * (o.K + std::pow(in.tau, a0 / 2)) * o.g_norm_padded +
                std::pow(in.tau, 1.0 / in.gamma) * std::pow(o.K, 1.0 / gp) / in.R + in.tau / (in.R * in.R) +
                (o.ell0 - o.ell1) * o.K;

  o.C2 = std::max(0.0, o.test0_lhs) / o.test0_rhs;
  o.C3 = std::max(0.0, o.xest0_lhs) / o.xest0_rhs;
  return o;
}

double gaussian_moment(int dim, double sigma, double tau, double alpha)
{
  return std::pow(4 * sigma * tau, alpha / 2) * std::tgamma((dim + alpha) / 2) / std::tgamma(dim / 2.0);
}

ExitMeasureReport exit_measure_report(const GridSpec& spec, double sigma, double alpha, double gamma)
{
  require_superquadratic(gamma);
  const GridPtr grid = make_grid(spec);
  FPProblem p;
  p.sigma = sigma;
  p.drift = VectorField(grid);
  const FPSolution sol = solve_fp(p);
  const double q0 = critical_integrability(gamma, grid->dim());

  ExitMeasureReport r;
  r.moment = moment_alpha(sol, alpha, grid->level_count() - 1).moment;
  r.density_norm = lq_norm(sol.m, q0 / (q0 - 1), Cylinder::of(*grid));
  r.outflux = sol.outflux[sol.outflux.size() - 1];
  r.gaussian_moment = gaussian_moment(grid->dim(), sigma, grid->horizon(), alpha);
  r.max_conservation_error = sol.max_conservation_error;
  return r;
}

double ldiff_ratio(const Eigen::VectorXd& zeta, const Eigen::VectorXd& xi, double gamma_prime)
{
  const double nz = zeta.norm();
  const double nx = xi.norm();
  const double denom = std::pow(nz, gamma_prime - 1) * nx + std::pow(nx, gamma_prime);
  if (nz == 0.0)
    return 1.0;
  if (denom == 0.0)
    return 0.0;
  const double rel = (2 * zeta.dot(xi) + nx * nx) / (nz * nz);
  double numer;
  if (rel > -1.0)
    numer = std::pow(nz, gamma_prime) * std::expm1(gamma_prime / 2 * std::log1p(rel));
  else
    numer = std::pow((zeta + xi).norm(), gamma_prime) - std::pow(nz, gamma_prime);
  return numer / denom;
}

double ldiff_cap(double gamma_prime)
{
  return std::max(gamma_prime * std::pow(2.0, gamma_prime - 1), gamma_prime * (gamma_prime - 1) + gamma_prime);
}

double ldiff_constant(double gamma_prime, std::int64_t samples, std::uint64_t seed)
{
  if (!(gamma_prime > 1.0 && gamma_prime < 2.0))
    throw std::invalid_argument("gamma' must lie in (1, 2)");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick_dim(1, 3);
  std::uniform_real_distribution<double> log_mag(std::log(1e-6), std::log(1e6));
  std::normal_distribution<double> normal;
  auto draw = [&](int n) {
    Eigen::VectorXd v(n);
    do {
      for (int a = 0; a < n; ++a)
        v[a] = normal(rng);
    } while (v.norm() == 0.0);
    return (v / v.norm() * std::exp(log_mag(rng))).eval();
  };
  double best = -std::numeric_limits<double>::infinity();
  for (std::int64_t s = 0; s < samples; ++s) {
    const int n = pick_dim(rng);
    const Eigen::VectorXd zeta = draw(n);
    const Eigen::VectorXd xi = draw(n);
    best = std::max(best, ldiff_ratio(zeta, xi, gamma_prime));
  }
  return best;
}

} // namespace vhj
