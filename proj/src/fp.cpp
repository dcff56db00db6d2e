#include "vhj/fp.hpp"

#include "vhj/calculus.hpp"
#include "vhj/exponents.hpp"
#include "vhj/quadrature.hpp"

#include "diffusion.hpp"

#include <algorithm>
#include <cmath>

namespace vhj {

namespace {

Eigen::MatrixXd drift_magnitude(const VectorField& b)
{
  return (b.component(0).array().square() + b.component(1).array().square()).sqrt().matrix();
}

double mass_of(const Grid& grid, const Eigen::VectorXd& m)
{
  double acc = 0.0;
  for (int node : grid.interior_nodes())
    acc += m[node];
  return acc * grid.cell_volume();
}

} // namespace

FPSolution solve_fp(const FPProblem& p)
{
  if (!(p.sigma > 0.0))
    throw std::invalid_argument("sigma must be positive");
  if (!p.drift.grid_ptr())
    throw std::invalid_argument("drift field is required");
  const GridPtr gp = p.drift.grid_ptr();
  const Grid& grid = *gp;
  const double dx = grid.dx();
  if (dx > grid.half_width() / 8 * (1 + 1e-12))
    throw std::invalid_argument("fp grid must satisfy dx <= R/8");
  if (!grid.contains(p.source) || grid.boundary_distance(p.source) < 2 * dx * (1 - 1e-12))
    throw std::invalid_argument("source point must lie at least 2 dx inside the domain");
  for (int a = 0; a < 2; ++a)
    if (!p.drift.component(a).allFinite())
      throw std::invalid_argument("drift has a non-finite value");

  const int levels = grid.level_count();
  const int dim = grid.dim();
  FPSolution sol;
  sol.sigma = p.sigma;
  sol.drift = p.drift;
  sol.m = ScalarField(gp);
  sol.mass = Eigen::VectorXd::Zero(levels);
  sol.outflux = Eigen::VectorXd::Zero(levels);
  sol.boundary_flux = Eigen::MatrixXd::Zero(grid.node_count(), levels);
  sol.substeps = Eigen::VectorXi::Ones(levels);
  sol.source_node = grid.nearest_node(p.source);
  if (!grid.interior(sol.source_node))
    throw std::invalid_argument("source node is not an interior node");

  Eigen::VectorXd m = Eigen::VectorXd::Zero(grid.node_count());
  m[sol.source_node] = 1.0 / grid.cell_volume();
  sol.m.level(0) = m;
  sol.mass[0] = mass_of(grid, m);

  const Eigen::MatrixXd speed = drift_magnitude(p.drift);
  const double face_factor = std::pow(dx, dim - 2);
  detail::ImplicitDiffusion diffusion(grid, p.sigma);

  for (int k = 0; k + 1 < levels; ++k) {
    const double bmax = std::max(speed.col(k).maxCoeff(), speed.col(k + 1).maxCoeff());
    int n = 1;
    while (grid.dt() / n * 2 * dim * bmax > dx) {
      n *= 2;
      if (n > (1 << 16))
        throw NumericalError("drift CFL subcycle limit exceeded at s=" + std::to_string(grid.time(k)));
    }
    sol.substeps[k + 1] = n;
    const double delta = grid.dt() / n;

    for (int i = 1; i <= n; ++i) {
      const double theta = (i - 0.5) / n;
      Eigen::VectorXd next = m;
      for (int node : grid.interior_nodes())
        for (int axis = 0; axis < dim; ++axis) {
          const int nb = grid.neighbor(node, axis, +1);
          if (nb < 0 || grid.boundary(nb))
            continue;
          const double bi = (1 - theta) * p.drift.component(axis)(node, k) + theta * p.drift.component(axis)(node, k + 1);
          const double bj = (1 - theta) * p.drift.component(axis)(nb, k) + theta * p.drift.component(axis)(nb, k + 1);
          // Particles move with velocity -b.
          const double v = -0.5 * (bi + bj);
          const double flux = v > 0 ? v * m[node] : v * m[nb];
          next[node] -= delta * flux / dx;
          next[nb] += delta * flux / dx;
        }
      for (int node : grid.boundary_nodes())
        next[node] = 0.0;
      Eigen::VectorXd rhs = next;
      diffusion.solve(delta, rhs, next);

      const double peak = next.cwiseAbs().maxCoeff();
      for (int node : grid.active_nodes()) {
        if (next[node] >= 0.0)
          continue;
        if (next[node] < -1e-12 * peak)
          throw std::logic_error("fp scheme produced a negative density at node " + std::to_string(node));
        next[node] = 0.0;
      }
      for (int node : grid.interior_nodes())
        for (int axis = 0; axis < dim; ++axis)
          for (int dir : {-1, 1}) {
            const int nb = grid.neighbor(node, axis, dir);
            if (grid.boundary(nb))
              sol.boundary_flux(nb, k + 1) += delta * p.sigma * next[node] * face_factor;
          }
      m = next;
    }
    sol.m.level(k + 1) = m;
    sol.mass[k + 1] = mass_of(grid, m);
    sol.outflux[k + 1] = sol.outflux[k] + sol.boundary_flux.col(k + 1).sum();
  }

  for (int k = 0; k < levels; ++k)
    sol.max_conservation_error = std::max(sol.max_conservation_error, std::abs(sol.mass[k] + sol.outflux[k] - 1.0));
  return sol;
}

VectorField drift_from_solution(const ScalarField& w, double h1, double gamma)
{
  const Grid& grid = w.grid();
  VectorField b(w.grid_ptr());
  for (int k = 0; k < grid.level_count(); ++k) {
    const Eigen::Matrix2Xd g = gradient_central(grid, w.level(k));
    for (int node : grid.active_nodes()) {
      const Point d = g.col(node);
      const double n = d.norm();
      if (n > 0.0)
        b.set(node, k, h1 * gamma * std::pow(n, gamma - 2.0) * d);
    }
  }
  return b;
}

double kinetic_energy(const FPSolution& sol, double gamma_prime, double t_from)
{
  const Grid& grid = sol.grid();
  Cylinder q = Cylinder::of(grid);
  q.t0 = t_from;
  const Eigen::MatrixXd integrand = drift_magnitude(sol.drift).array().pow(gamma_prime) * sol.m.values().array();
  return integrate(grid, integrand, q);
}

double drift_mass(const FPSolution& sol, double t)
{
  const Grid& grid = sol.grid();
  Cylinder q = Cylinder::of(grid);
  q.t1 = t;
  const Eigen::MatrixXd integrand = drift_magnitude(sol.drift).array() * sol.m.values().array();
  return integrate(grid, integrand, q);
}

MomentReport moment_alpha(const FPSolution& sol, double alpha, int level)
{
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("alpha must lie in (0, 1)");
  const Grid& grid = sol.grid();
  if (level < 0 || level >= grid.level_count())
    throw std::invalid_argument("level out of range");
  const Point x0 = grid.position(sol.source_node);
  Eigen::VectorXd integrand = Eigen::VectorXd::Zero(grid.node_count());
  for (int node : grid.active_nodes())
    integrand[node] = std::pow((grid.position(node) - x0).norm(), alpha) * sol.m(node, level);
  const double t = grid.time(level);
  MomentReport r;
  r.moment = integrate_level(grid, integrand, Cylinder::of(grid));
  r.drift_term = std::pow(drift_mass(sol, t), alpha);
  r.diffusion_term = std::pow(sol.sigma * t, alpha / 2);
  const double budget = r.drift_term + r.diffusion_term;
  r.fitted = budget > 0.0 ? r.moment / budget : 0.0;
  return r;
}

BoundaryLossReport boundary_loss_check(const FPSolution& sol, double gamma)
{
  require_superquadratic(gamma);
  const double gp = conjugate_exponent(gamma);
  const double tau = sol.horizon();
  const double R = sol.grid().half_width();
  BoundaryLossReport r;
  r.outflux = sol.outflux[sol.outflux.size() - 1];
  r.kinetic = kinetic_energy(sol, gp);
  r.drift_term = std::pow(tau, 1.0 / gamma) * std::pow(r.kinetic, 1.0 / gp) / R;
  r.diffusion_term = sol.sigma * tau / (R * R);
  r.fitted = r.outflux / (r.drift_term + r.diffusion_term);
  return r;
}

DensityNormReport m_norm_bound_check(const FPSolution& sol, double gamma, double t_from)
{
  require_superquadratic(gamma);
  const Grid& grid = sol.grid();
  const double tau = grid.horizon();
  const double R = grid.half_width();
  if (R * R < tau * sol.sigma)
    throw std::invalid_argument("density bound requires R^2 >= tau sigma");
  if (t_from < 0.0)
    t_from = tau / 10;
  const double gp = conjugate_exponent(gamma);
  const double q0 = critical_integrability(gamma, grid.dim());
  DensityNormReport r;
  r.exponent = q0 / (q0 - 1.0);
  Cylinder late = Cylinder::of(grid);
  late.t0 = t_from;
  r.norm = lq_norm(sol.m, r.exponent, late);
  r.norm_full = lq_norm(sol.m, r.exponent, Cylinder::of(grid));
  r.lhs = std::pow(sol.sigma, rescaled_norm_exponent(gamma, grid.dim())) * r.norm;
  r.kinetic = kinetic_energy(sol, gp);
  r.diffusion_term = std::pow(sol.sigma, gp / 2) * std::pow(tau, critical_holder(gamma) / 2);
  r.fitted = r.lhs / (r.kinetic + r.diffusion_term);
  r.initial_layer_dominates = r.norm_full > 2 * r.norm;
  return r;
}

} // namespace vhj
