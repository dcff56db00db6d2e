#include "vhj/hj.hpp"

#include "vhj/calculus.hpp"

#include "diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace vhj {

using detail::ImplicitDiffusion;

namespace {

bool same_grid(const ScalarField& a, const ScalarField& b)
{
  return a.grid_ptr() == b.grid_ptr() || a.grid().spec() == b.grid().spec();
}

// (u^k - u^{k+1})/dt - sigma Lap u^k + h G(u^{k+1})^gamma at interior nodes.
Eigen::VectorXd level_operator(const Grid& grid, const LevelRef& uk, const LevelRef& uk1, const LevelRef& hk,
                               double sigma, double gamma)
{
  const Eigen::VectorXd lap = laplacian(grid, uk);
  const Eigen::VectorXd g = gradient_godunov(grid, uk1);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(grid.node_count());
  for (int node : grid.interior_nodes())
    out[node] = (uk[node] - uk1[node]) / grid.dt() - sigma * lap[node] + hk[node] * std::pow(g[node], gamma);
  return out;
}

[[noreturn]] void report_blowup(const Grid& grid, int node, double t)
{
  const Point x = grid.position(node);
  std::ostringstream os;
  os.precision(17);
  os << "blow-up detected at (" << x[0];
  if (grid.dim() == 2)
    os << ", " << x[1];
  os << ", " << t << ")";
  throw NumericalError(os.str());
}

} // namespace

void HJProblem::validate() const
{
  require_superquadratic(gamma);
  if (!(sigma > 0.0 && sigma <= 1.0))
    throw std::invalid_argument("sigma must lie in (0, 1]");
  if (!(h0 > 0.0))
    throw std::invalid_argument("h0 must be positive");
  if (!(h1 >= h0))
    throw std::invalid_argument("h1 must be at least h0");
  if (!h.grid_ptr() || !f.grid_ptr() || !data.grid_ptr())
    throw std::invalid_argument("h, f and data fields are required");
  if (!same_grid(h, f) || !same_grid(h, data))
    throw std::invalid_argument("h, f and data must share one grid");
  h.require_finite("h");
  f.require_finite("f");
  data.require_finite("data");
  const double tol = 1e-12 * std::max(1.0, h1);
  for (int k = 0; k < h.grid().level_count(); ++k)
    for (int node : h.grid().active_nodes())
      if (h(node, k) < h0 - tol || h(node, k) > h1 + tol)
        throw std::invalid_argument("h must stay within [h0, h1]");
}

HJSolution solve_hj(const HJProblem& p)
{
  p.validate();
  const Grid& grid = p.h.grid();
  const int levels = grid.level_count();
  const double dt = grid.dt();
  const double dx = grid.dx();

  HJSolution sol;
  sol.u = ScalarField(p.h.grid_ptr());
  sol.u.level(levels - 1) = p.data.level(levels - 1);

  double bound = p.gradient_bound > 0.0 ? p.gradient_bound : lipschitz_estimate(grid, p.data.level(levels - 1));
  auto substeps_for = [&](double pb) {
    int j = 0;
    while (j <= 40 && (dt / std::ldexp(1.0, j)) * grid.dim() * p.gamma * p.h1 * std::pow(pb, p.gamma - 1.0) > dx)
      ++j;
    return j;
  };

  ImplicitDiffusion diffusion(grid, p.sigma);
  for (int k = levels - 2; k >= 0; --k) {
    int j = substeps_for(bound);
    int retries = 0;
    Eigen::VectorXd v;
    double linres = 0.0;
    for (;;) {
      if (j > 40)
        throw NumericalError("CFL substep count exceeds 2^40 at t=" + std::to_string(grid.time(k)));
      const int n = 1 << std::min(j, 30);
      const double delta = dt / n;
      v = sol.u.level(k + 1);
      bool ok = true;
      int worst = -1;
      for (int i = 1; i <= n && ok; ++i) {
        const double theta = static_cast<double>(i) / n;
        const Eigen::VectorXd g = gradient_godunov(grid, v);
        double gmax = 0.0;
        for (int node : grid.interior_nodes())
          if (g[node] > gmax) {
            gmax = g[node];
            worst = node;
          }
        if (!std::isfinite(gmax))
          report_blowup(grid, worst < 0 ? grid.interior_nodes().front() : worst, grid.time(k));
        if (delta * grid.dim() * p.gamma * p.h1 * std::pow(gmax, p.gamma - 1.0) > dx * (1.0 + 1e-12)) {
          bound = std::max(bound, gmax);
          ok = false;
          break;
        }
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(grid.node_count());
        for (int node : grid.interior_nodes()) {
          const double fi = (1.0 - theta) * p.f(node, k + 1) + theta * p.f(node, k);
          const double hi = (1.0 - theta) * p.h(node, k + 1) + theta * p.h(node, k);
          rhs[node] = v[node] + delta * (fi - hi * std::pow(g[node], p.gamma));
        }
        for (int node : grid.boundary_nodes())
          v[node] = (1.0 - theta) * p.data(node, k + 1) + theta * p.data(node, k);
        linres = diffusion.solve(delta, rhs, v);
      }
      if (ok)
        break;
      if (++retries > 10) {
        std::ostringstream os;
        os << "CFL retry limit exceeded at node " << worst << " (x=" << grid.position(worst)[0]
           << ", t=" << grid.time(k) << ")";
        throw NumericalError(os.str());
      }
      j = std::max(j + 1, substeps_for(bound));
    }
    for (int node : grid.active_nodes())
      if (!std::isfinite(v[node]))
        report_blowup(grid, node, grid.time(k));
    sol.u.level(k) = v;
    StepRecord rec;
    rec.level = k;
    rec.t = grid.time(k);
    rec.substeps = 1 << std::min(j, 30);
    rec.gradient_bound = bound;
    rec.linear_residual = linres;
    sol.log.push_back(rec);
  }

  sol.residual = equation_residual(sol.u, p.h, p.f, p.sigma, p.gamma);
  for (auto& rec : sol.log)
    rec.max_residual = sol.residual.level(rec.level).cwiseAbs().maxCoeff();
  return sol;
}

ScalarField equation_residual(const ScalarField& u, const ScalarField& h, const ScalarField& f, double sigma,
                              double gamma)
{
  if (!same_grid(u, h) || !same_grid(u, f))
    throw std::invalid_argument("residual fields must share one grid");
  const Grid& grid = u.grid();
  ScalarField r(u.grid_ptr());
  for (int k = 0; k + 1 < grid.level_count(); ++k) {
    Eigen::VectorXd op = level_operator(grid, u.level(k), u.level(k + 1), h.level(k), sigma, gamma);
    for (int node : grid.interior_nodes())
      r(node, k) = op[node] - f(node, k);
  }
  return r;
}

InequalitySlack differential_inequality_check(const ScalarField& w, const ScalarField& g, double sigma, double h0,
                                              double h1, double gamma)
{
  if (!same_grid(w, g))
    throw std::invalid_argument("w and g must share one grid");
  const Grid& grid = w.grid();
  InequalitySlack s;
  s.lower = s.upper = std::numeric_limits<double>::infinity();
  const Eigen::VectorXd c0 = Eigen::VectorXd::Constant(grid.node_count(), h0);
  const Eigen::VectorXd c1 = Eigen::VectorXd::Constant(grid.node_count(), h1);
  for (int k = 0; k + 1 < grid.level_count(); ++k) {
    const Eigen::VectorXd op0 = level_operator(grid, w.level(k), w.level(k + 1), c0, sigma, gamma);
    const Eigen::VectorXd op1 = level_operator(grid, w.level(k), w.level(k + 1), c1, sigma, gamma);
    for (int node : grid.interior_nodes()) {
      const double lo = g(node, k) - op0[node];
      const double hi = op1[node] - g(node, k);
      if (lo < s.lower) {
        s.lower = lo;
        s.lower_node = node;
        s.lower_level = k;
      }
      if (hi < s.upper) {
        s.upper = hi;
        s.upper_node = node;
        s.upper_level = k;
      }
    }
  }
  if (s.lower_node < 0)
    s.lower = s.upper = 0.0;
  return s;
}

ManufacturedSolution ManufacturedSolution::constant(double c)
{
  ManufacturedSolution m;
  m.name = "constant";
  m.value = [c](const Point&, double) { return c; };
  m.time_derivative = [](const Point&, double) { return 0.0; };
  m.gradient = [](const Point&, double) { return Point::Zero().eval(); };
  m.laplacian = [](const Point&, double) { return 0.0; };
  return m;
}

ManufacturedSolution ManufacturedSolution::linear_in_time(double c, double horizon)
{
  ManufacturedSolution m = constant(0.0);
  m.name = "linear";
  m.value = [c, horizon](const Point&, double t) { return c * (horizon - t); };
  m.time_derivative = [c](const Point&, double) { return -c; };
  return m;
}

ManufacturedSolution ManufacturedSolution::separable_sine(double amplitude, double wavenumber, double phase,
                                                          double horizon)
{
  const double a = amplitude, k = wavenumber, T = horizon;
  ManufacturedSolution m;
  m.name = "sine";
  m.value = [=](const Point& x, double t) { return a * std::sin(k * x[0] + phase) * (T - t); };
  m.time_derivative = [=](const Point& x, double) { return -a * std::sin(k * x[0] + phase); };
  m.gradient = [=](const Point& x, double t) { return Point(a * k * std::cos(k * x[0] + phase) * (T - t), 0.0); };
  m.laplacian = [=](const Point& x, double t) { return -a * k * k * std::sin(k * x[0] + phase) * (T - t); };
  return m;
}

ManufacturedSolution ManufacturedSolution::by_name(const std::string& name, double horizon)
{
  if (name == "constant")
    return constant(1.0);
  if (name == "linear")
    return linear_in_time(1.0, horizon);
  if (name == "sine")
    return separable_sine(1.0, std::numbers::pi, 0.0, horizon);
  throw std::invalid_argument("unknown manufactured solution '" + name + "' (constant, linear, sine)");
}

ScalarField manufactured_rhs(const ManufacturedSolution& sol, const HJProblem& p)
{
  const Grid& grid = p.h.grid();
  ScalarField f(p.h.grid_ptr());
  for (int k = 0; k < grid.level_count(); ++k) {
    const double t = grid.time(k);
    for (int node : grid.active_nodes()) {
      const Point x = grid.position(node);
      f(node, k) = -sol.time_derivative(x, t) - p.sigma * sol.laplacian(x, t) +
                   p.h(node, k) * std::pow(sol.gradient(x, t).norm(), p.gamma);
    }
  }
  return f;
}

HJProblem manufactured_problem(const ManufacturedSolution& sol, GridPtr grid, double gamma, double sigma, double h)
{
  HJProblem p;
  p.gamma = gamma;
  p.sigma = sigma;
  p.h0 = p.h1 = h;
  p.h = ScalarField::constant(grid, h);
  p.data = ScalarField::sample(grid, sol.value);
  p.f = manufactured_rhs(sol, p);
  return p;
}

double legendre_sup(double ell, double gamma_prime, const Eigen::VectorXd& p)
{
  const int n = static_cast<int>(p.size());
  const double pn = p.norm();
  if (pn == 0.0)
    return 0.0;
  auto objective = [&](const Eigen::VectorXd& q) { return p.dot(q) - ell * std::pow(q.norm(), gamma_prime); };

  // Coarse tensor grid on the box that contains the maximiser.
  const double box = 1.05 * std::pow(pn / ell, 1.0 / (gamma_prime - 1.0));
  const int per_axis = n == 1 ? 2001 : n == 2 ? 201 : 41;
  const double step = 2.0 * box / (per_axis - 1);
  Eigen::VectorXd best = Eigen::VectorXd::Zero(n);
  double best_value = 0.0;
  Eigen::VectorXi idx = Eigen::VectorXi::Zero(n);
  for (;;) {
    Eigen::VectorXd q(n);
    for (int a = 0; a < n; ++a)
      q[a] = -box + idx[a] * step;
    const double v = objective(q);
    if (v > best_value) {
      best_value = v;
      best = q;
    }
    int a = 0;
    while (a < n && ++idx[a] == per_axis)
      idx[a++] = 0;
    if (a == n)
      break;
  }

  // Compass refinement; the objective is concave so this converges.
  double h = step;
  while (h > 1e-15 * std::max(1.0, box)) {
    bool moved = false;
    for (int a = 0; a < n; ++a)
      for (double dir : {-1.0, 1.0}) {
        Eigen::VectorXd q = best;
        q[a] += dir * h;
        const double v = objective(q);
        if (v > best_value) {
          best_value = v;
          best = q;
          moved = true;
        }
      }
    if (!moved)
      h /= 2;
  }
  return best_value;
}

double legendre_gap(double h, double gamma, const std::vector<Eigen::VectorXd>& p_samples)
{
  if (!(h > 0.0))
    throw std::invalid_argument("h must be positive");
  require_superquadratic(gamma);
  const double gp = conjugate_exponent(gamma);
  const double ell = lagrangian_coefficient(h, gamma);
  double gap = 0.0;
  for (const auto& p : p_samples)
    gap = std::max(gap, std::abs(legendre_sup(ell, gp, p) - h * std::pow(p.norm(), gamma)));
  return gap;
}

} // namespace vhj
