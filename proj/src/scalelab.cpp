#include "vhj/scalelab.hpp"

#include "vhj/calculus.hpp"
#include "vhj/dual.hpp"
#include "vhj/exponents.hpp"
#include "vhj/hj.hpp"
#include "vhj/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace vhj {

double BlowupParams::time_scale() const
{
  if (variant == BlowupVariant::alpha0)
    return std::pow(r, gamma) / std::pow(M, gamma - 1);
  return r * r;
}

double BlowupParams::sigma_n() const
{
  return variant == BlowupVariant::alpha0 ? std::pow(r, gamma - 2) / std::pow(M, gamma - 1) : 0.0;
}

double BlowupParams::theta_n() const
{
  return variant == BlowupVariant::alpha ? std::pow(M, gamma - 1) / std::pow(r, gamma - 2) : 0.0;
}

double BlowupParams::source_factor() const
{
  if (variant == BlowupVariant::alpha0)
    return std::pow(r / M, gamma);
  return r * r / M;
}

double BlowupMap::operator()(const Point& y, double s) const
{
  return interpolate(u_, p_.to_original(y), p_.to_original_time(s)) / p_.M;
}

namespace {

void require_positive_params(const BlowupParams& p)
{
  if (!(p.M > 0.0) || !(p.r > 0.0))
    throw std::invalid_argument("blow-up parameters need M > 0 and r > 0");
  require_superquadratic(p.gamma);
}

Cylinder preimage(const Grid& target, const BlowupParams& p)
{
  const double R = target.half_width() * p.r;
  const double t0 = p.tbar;
  const double t1 = p.tbar + p.time_scale() * target.horizon();
  if (target.spec().ball)
    return Cylinder::ball(p.xbar, R, t0, t1);
  Point lo = p.xbar - Point::Constant(R);
  Point hi = p.xbar + Point::Constant(R);
  if (target.dim() == 1) {
    lo[1] = hi[1] = 0.0;
  }
  return Cylinder::box(lo, hi, t0, t1);
}

std::string describe(const Grid& g, int node, double t)
{
  std::ostringstream os;
  os.precision(17);
  const Point x = g.position(node);
  os << "node " << node << " (y=" << x[0];
  if (g.dim() == 2)
    os << "," << x[1];
  os << ", s=" << t << ")";
  return os.str();
}

} // namespace

BlowupResult blowup_transform(const ScalarField& u, const ScalarField& f, const ScalarField& h,
                              const BlowupParams& p, GridPtr target, double q)
{
  require_positive_params(p);
  if (!(u.grid().spec() == f.grid().spec()) || !(u.grid().spec() == h.grid().spec()))
    throw std::invalid_argument("u, f and h must share one grid");
  if (target->dim() != u.grid().dim())
    throw std::invalid_argument("target grid dimension differs from the source grid");

  BlowupResult out;
  out.params = p;
  out.w = ScalarField(target);
  out.g = ScalarField(target);
  out.h = ScalarField(target);
  const double factor = p.source_factor();
  for (int k = 0; k < target->level_count(); ++k) {
    const double s = target->time(k);
    for (int node : target->active_nodes()) {
      const Point x = p.to_original(target->position(node));
      const double t = p.to_original_time(s);
      try {
        out.w(node, k) = interpolate(u, x, t) / p.M;
        out.g(node, k) = factor * interpolate(f, x, t);
        out.h(node, k) = interpolate(h, x, t);
      } catch (const std::out_of_range& e) {
        throw std::out_of_range("blow-up preimage of " + describe(*target, node, s) + " leaves the source grid: " +
                                e.what());
      }
    }
  }
  if (p.variant == BlowupVariant::alpha0) {
    out.sigma = p.sigma_n();
    out.theta = 1.0;
  } else {
    out.sigma = 1.0;
    out.theta = p.theta_n();
  }

  const int dim = target->dim();
  const double q0 = critical_integrability(p.gamma, dim);
  if (q <= 0.0)
    q = q0;
  out.norm_exponent_q = q;
  out.g_norm = lq_norm(out.g, q, Cylinder::of(*target));
  out.f_norm = lq_norm(f, q, preimage(*target, p));
  if (p.variant == BlowupVariant::alpha0 && q == q0)
    out.norm_factor = std::pow(p.sigma_n(), rescaled_norm_exponent(p.gamma, dim));
  else if (p.variant == BlowupVariant::alpha)
    out.norm_factor = std::pow(p.r, 2.0 - (dim + 2) / q) / p.M;
  else
    out.norm_factor = factor * std::pow(std::pow(p.r, dim) * p.time_scale(), -1.0 / q);
  return out;
}

ScalarField inverse_blowup(const ScalarField& w, const BlowupParams& p, GridPtr target)
{
  require_positive_params(p);
  const double lambda = p.time_scale();
  ScalarField u(target);
  for (int k = 0; k < target->level_count(); ++k) {
    const double t = target->time(k);
    for (int node : target->active_nodes()) {
      const Point y = (target->position(node) - p.xbar) / p.r;
      const double s = (t - p.tbar) / lambda;
      try {
        u(node, k) = p.M * interpolate(w, y, s);
      } catch (const std::out_of_range& e) {
        throw std::out_of_range("inverse blow-up of " + describe(*target, node, t) + " leaves the rescaled grid: " +
                                e.what());
      }
    }
  }
  return u;
}

ScalarField rescaled_residual(const BlowupResult& b, double gamma)
{
  const ScalarField coeff(b.h.grid_ptr(), b.theta * b.h.values());
  return equation_residual(b.w, coeff, b.g, b.sigma, gamma);
}

double normalization_check(const ScalarField& u, const BlowupParams& p)
{
  require_positive_params(p);
  const BlowupMap w(u, p);
  return std::abs(w(p.y0, p.s0) - w(Point::Zero(), 0.0));
}

BlowupParams worst_pair_selection(const ScalarField& u, SelectionKind kind, double alpha, double z, double gamma,
                                  const Cylinder& q, const SeminormOptions& opts)
{
  require_superquadratic(gamma);
  const Grid& grid = u.grid();
  const int dim = grid.dim();
  auto position = [&](const SpaceTimeNode& n) { return grid.position(n.node); };
  auto clamped_time = [&](const SpaceTimeNode& n) { return std::clamp(grid.time(n.level), q.t0, q.t1); };
  auto value = [&](const SpaceTimeNode& n) { return u(n.node, n.level); };

  BlowupParams p;
  p.gamma = gamma;
  p.z = z;

  if (kind == SelectionKind::nonlinear) {
    p.variant = BlowupVariant::alpha0;
    const SeminormValue sx = nonlinear_space(u, alpha, gamma, q, opts);
    const SeminormValue st = nonlinear_time(u, alpha, gamma, q, opts);
    const double tpart = std::pow(st.value / z, 2.0 / gamma);
    const double combined = std::max(sx.value, tpart);
    if (!(combined > 0.0))
      throw std::invalid_argument("u is constant on Q: no worst pair");
    p.L = combined / 2;
    auto dalpha = [&](const SpaceTimeNode& n) {
      return parabolic_distance(position(n), clamped_time(n), q, dim, DistanceKind::holder, alpha, gamma);
    };

    if (sx.value >= tpart) {
      p.selection_case = 'a';
      const double d1 = dalpha(sx.first), d2 = dalpha(sx.second);
      const SpaceTimeNode bar = d2 < d1 ? sx.second : sx.first;
      const SpaceTimeNode other = d2 < d1 ? sx.first : sx.second;
      const Point xb = position(bar), xn = position(other);
      const double g0 = xn[0] - xb[0], g1 = xn[1] - xb[1];
      p.xbar = xb;
      p.tbar = grid.time(bar.level);
      p.M = std::abs(value(other) - value(bar));
      p.r = std::sqrt(g0 * g0 + g1 * g1);
      p.d = q.boundary_distance(xb, dim);
      p.quotient = std::min(d1, d2) * (p.M / std::pow(p.r, alpha));
      p.scaled_form = dalpha(bar) * p.M / std::pow(p.r, alpha);
      p.y0 = (xn - xb) / p.r;
      p.s0 = 0.0;
    } else {
      p.selection_case = 'b';
      const bool first_earlier = st.first.level < st.second.level;
      const SpaceTimeNode bar = first_earlier ? st.first : st.second;
      const SpaceTimeNode later = first_earlier ? st.second : st.first;
      const double d1 = dalpha(st.first), d2 = dalpha(st.second);
      const double du = std::abs(value(st.first) - value(st.second));
      const double dt = std::abs(grid.time(st.first.level) - grid.time(st.second.level));
      p.xbar = position(bar);
      p.tbar = grid.time(bar.level);
      p.M = du / z;
      p.r = std::pow(dt, 1.0 / gamma) * std::pow(p.M, (gamma - 1) / gamma);
      p.d = q.boundary_distance(p.xbar, dim);
      const double pair = std::pow(std::min(d1, d2), gamma / 2.0) * (du / std::pow(dt, alpha / 2.0));
      p.quotient = std::pow(pair / z, 2.0 / gamma);
      p.scaled_form = dalpha(later) * p.M / std::pow(p.r, alpha);
      p.y0 = Point::Zero();
      p.s0 = 1.0;
    }
    return p;
  }

  p.variant = BlowupVariant::alpha;
  const double c = alpha - critical_holder(gamma);
  if (c < 0.0)
    throw std::invalid_argument("weighted classical selection needs alpha >= alpha0");
  const SeminormValue v = weighted_holder(u, alpha, c, q, opts);
  if (!(v.value > 0.0))
    throw std::invalid_argument("u is constant on Q: no worst pair");
  p.L = v.value / 2;
  p.selection_case = 'c';
  auto dpar = [&](const SpaceTimeNode& n) {
    return parabolic_distance(position(n), clamped_time(n), q, dim, DistanceKind::parabolic);
  };
  const double d1 = dpar(v.first), d2 = dpar(v.second);
  const SpaceTimeNode bar = d2 < d1 ? v.second : v.first;
  const SpaceTimeNode other = d2 < d1 ? v.first : v.second;
  const Point xb = position(bar), xn = position(other);
  const double g0 = xn[0] - xb[0], g1 = xn[1] - xb[1];
  const double tb = grid.time(bar.level), tn = grid.time(other.level);
  p.xbar = xb;
  p.tbar = tb;
  p.M = std::abs(value(other) - value(bar));
  p.r = std::sqrt(g0 * g0 + g1 * g1) + std::sqrt(std::abs(tn - tb));
  p.d = std::min(d1, d2);
  p.quotient = std::pow(std::min(d1, d2), c) * (p.M / std::pow(p.r, alpha));
  p.scaled_form = std::pow(p.d, c) * p.M / std::pow(p.r, alpha);
  p.y0 = (xn - xb) / p.r;
  p.s0 = (tn - tb) / (p.r * p.r);
  return p;
}

double liouville_budget(double tau, double alpha, double gamma)
{
  const double a0 = critical_holder(gamma);
  const double gp = conjugate_exponent(gamma);
  const double inner =
    std::pow(tau, alpha / 2) + std::pow(tau, a0 / 2) + std::pow(tau, alpha / (gamma - alpha * (gamma - 1)));
  return std::pow(inner / tau, 1.0 / gamma) + std::pow(tau, -(gp - 1));
}

std::vector<LiouvilleRow> liouville_probe(const LiouvilleConfig& c)
{
  require_superquadratic(c.gamma);
  if (!(c.h > 0.0))
    throw std::invalid_argument("h must be positive");
  std::vector<LiouvilleRow> rows;
  for (double R : c.R_list)
    for (double tau : c.tau_list) {
      LiouvilleRow row;
      row.R = R;
      row.tau = tau;
      row.budget = liouville_budget(tau, c.alpha, c.gamma);

      GridSpec spec;
      spec.dim = c.dim;
      spec.half_width = R + 1;
      spec.dx = c.dx;
      spec.horizon = tau;
      spec.dt = c.dt;
      const GridPtr grid = make_grid(spec);
      const double L = R + 1;
      const double A = c.amplitude;
      const int dim = c.dim;
      auto profile = [=](const Point& x, double) {
        double v = A * std::sin(std::numbers::pi * x[0] / L);
        if (dim == 2)
          v *= std::cos(std::numbers::pi * x[1] / (2 * L));
        return v;
      };
      HJProblem p;
      p.gamma = c.gamma;
      p.sigma = 1.0;
      p.h0 = p.h1 = c.h;
      p.h = ScalarField::constant(grid, c.h);
      p.f = ScalarField::constant(grid, 0.0);
      p.data = ScalarField::sample(grid, profile);

      try {
        const HJSolution sol = solve_hj(p);
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (int node : grid->active_nodes())
          if (grid->position(node).norm() <= 1.0 + 1e-12) {
            lo = std::min(lo, sol.u(node, 0));
            hi = std::max(hi, sol.u(node, 0));
          }
        row.oscillation = hi - lo;

        OscillationInputs in;
        in.sigma = 1.0;
        in.h0 = in.h1 = c.h;
        in.gamma = c.gamma;
        in.alpha = c.alpha;
        in.z = c.z;
        in.R = R;
        in.tau = tau;
        in.y0 = Point::UnitX();
        const OscillationBudget o = oscillation_report(sol.u, p.f, in);
        row.xest0_lhs = o.xest0_lhs;
        row.xest0_rhs = o.xest0_rhs;
        row.C3 = o.C3;
        row.K = o.K;
      } catch (const NumericalError& e) {
        row.status = "failed";
      } catch (const std::invalid_argument& e) {
        row.status = "normalization";
      }
      rows.push_back(row);
    }
  return rows;
}

std::vector<MaxregRow> maxreg_sweep(const MaxregConfig& c)
{
  require_superquadratic(c.gamma);
  std::vector<MaxregRow> rows;
  for (double q : c.q_list) {
    if (!(q >= 1.0))
      throw std::invalid_argument("sweep exponents must be at least 1");
    const double beta = 0.95 * (c.dim + 2) / q;
    for (double dx : c.dx_list) {
      GridSpec spec;
      spec.dim = c.dim;
      spec.half_width = c.R;
      spec.dx = dx;
      spec.horizon = c.T;
      spec.dt = c.dt_factor * dx * dx;
      const GridPtr grid = make_grid(spec);
      double previous = 0.0;
      for (size_t e = 0; e < c.eps_list.size(); ++e) {
        const double eps = c.eps_list[e];
        MaxregRow row;
        row.q = q;
        row.eps = eps;
        row.dx = dx;
        const double ts = c.t_singular;
        ScalarField f = ScalarField::sample(grid, [&](const Point& x, double t) {
          if (c.constant_family)
            return 1.0;
          const double rho = x.norm() + std::sqrt(std::abs(t - ts));
          return std::pow(std::max(rho, eps), -beta);
        });
        const double raw = lq_norm(f, q, Cylinder::of(*grid));
        f.values() /= raw;
        row.f_norm = lq_norm(f, q, Cylinder::of(*grid));

        HJProblem p;
        p.gamma = c.gamma;
        p.sigma = 1.0;
        p.h0 = p.h1 = 1.0;
        p.h = ScalarField::constant(grid, 1.0);
        p.f = f;
        p.data = ScalarField::constant(grid, 0.0);
        p.q = q;
        try {
          const HJSolution sol = solve_hj(p);
          const W21qNorms n = w21q_norms(sol.u, q, c.gamma, c.sub);
          row.dtu = n.time_derivative;
          row.hessian = n.hessian;
          row.gradient_power = n.gradient_power;
          row.ratio = n.sum() / row.f_norm;
          if (!std::isfinite(row.ratio))
            row.status = "failed";
          else if (e > 0 && previous > 0.0 && row.ratio > 1.1 * previous)
            row.status = "growth";
          previous = row.ratio;
        } catch (const NumericalError&) {
          row.status = "failed";
        }
        rows.push_back(row);
      }
    }
  }
  return rows;
}

InterpolationBoundReport interpolation_bound_check(const ScalarField& v, const ScalarField& g, double q, double gamma,
                                                   double R)
{
  require_superquadratic(gamma);
  const Grid& grid = v.grid();
  if (!(g.grid().spec() == grid.spec()))
    throw std::invalid_argument("v and g must share one grid");
  InterpolationBoundReport r;
  r.alpha = holder_from_integrability(q, grid.dim());
  if (!(r.alpha > 0.0 && r.alpha < 1.0))
    throw std::invalid_argument("exponent relation requires 0 < alpha = 2 - (N+2)/q < 1");
  if (grid.half_width() < 2 * R - 1e-12 || grid.horizon() < 4 * R * R - 1e-12)
    throw std::invalid_argument("grid must cover B_2R x (0, 4R^2)");
  const int origin = grid.nearest_node(Point::Zero());
  if (grid.position(origin).norm() > 1e-12 || std::abs(v(origin, 0)) > 1e-12)
    throw std::invalid_argument("v must vanish at the origin");

  const Cylinder outer = Cylinder::ball(Point::Zero(), 2 * R, 0.0, 4 * R * R);
  const Cylinder inner = Cylinder::ball(Point::Zero(), R, R * R, 2 * R * R);
  r.c1 = lq_norm(g, q, outer) + holder_seminorm(v, r.alpha, outer).value;

  const ScalarField zero = ScalarField::constant(v.grid_ptr(), 0.0);
  const ScalarField op = equation_residual(v, zero, zero, 1.0, gamma);
  const CylinderNodes members = nodes_in(grid, outer);
  for (int k : members.levels) {
    if (k + 1 >= grid.level_count())
      continue;
    const Eigen::VectorXd grad = gradient_godunov(grid, v.level(k + 1));
    for (int node : members.nodes) {
      if (!grid.interior(node))
        continue;
      const double excess = std::abs(op(node, k)) - g(node, k);
      if (excess <= 1e-12)
        continue;
      const double gp = std::pow(grad[node], gamma);
      r.c2 = gp > 0.0 ? std::max(r.c2, excess / gp) : std::numeric_limits<double>::infinity();
    }
  }
  const W21qNorms n = w21q_norms(v, q, gamma, inner);
  r.dtv = n.time_derivative;
  r.hessian = n.hessian;
  r.K = r.dtv + r.hessian;
  return r;
}

} // namespace vhj
