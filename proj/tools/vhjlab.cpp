#include "vhj/acceptance.hpp"
#include "vhj/config.hpp"
#include "vhj/dual.hpp"
#include "vhj/exponents.hpp"
#include "vhj/field_io.hpp"
#include "vhj/fp.hpp"
#include "vhj/hj.hpp"
#include "vhj/quadrature.hpp"
#include "vhj/scalelab.hpp"
#include "vhj/seminorm.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <list>
#include <numbers>
#include <sstream>

using namespace vhj;

namespace {

/// Raised when a run completes but a checked property does not hold.
class VerificationFailure : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

std::string num(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// CSV table whose every row starts with the config hash.
class Table
{
public:
  Table(std::string path, const Config& cfg, const std::vector<std::string>& columns)
    : path_(std::move(path))
    , hash_(cfg.hash())
    , os_(path_)
  {
    if (!os_)
      throw std::runtime_error("cannot write '" + path_ + "'");
    os_ << "# config_hash: " << hash_ << "\n# config_hash";
    for (const auto& c : columns)
      os_ << ',' << c;
    os_ << '\n';
  }

  Table& row()
  {
    if (open_)
      os_ << '\n';
    os_ << hash_;
    open_ = true;
    return *this;
  }
  Table& operator<<(double v)
  {
    os_ << ',' << num(v);
    return *this;
  }
  Table& operator<<(int v)
  {
    os_ << ',' << v;
    return *this;
  }
  Table& operator<<(const std::string& s)
  {
    os_ << ',' << s;
    return *this;
  }
  ~Table()
  {
    if (open_)
      os_ << '\n';
  }
  const std::string& path() const { return path_; }

private:
  std::string path_;
  std::string hash_;
  std::ofstream os_;
  bool open_ = false;
};

void write_field(const std::string& path, const ScalarField& u, const Config& cfg)
{
  std::ofstream os(path);
  if (!os)
    throw std::runtime_error("cannot write '" + path + "'");
  write_field_csv(os, u);
  os << "# config_hash: " << cfg.hash() << '\n';
}

/// Flag values collected by CLI11, applied to the config in declaration order.
struct Overrides
{
  std::string config_file;
  std::vector<std::string> sets;
  std::list<std::pair<std::string, std::string>> flags; // stable addresses for CLI11
  std::string grid;
  std::string tau;

  std::string* flag(const std::string& key)
  {
    flags.emplace_back(key, std::string());
    return &flags.back().second;
  }

  Config resolve() const
  {
    Config cfg = config_file.empty() ? Config() : Config::load(config_file);
    if (!grid.empty()) {
      const GridSpec g = parse_grid_spec(grid);
      cfg.set("dim", std::to_string(g.dim));
      cfg.set("R", num(g.half_width));
      cfg.set("dx", num(g.dx));
      cfg.set("T", num(g.horizon));
      cfg.set("dt", num(g.dt));
      cfg.set("mask", g.ball ? "ball" : "box");
    }
    for (const auto& [key, value] : flags)
      if (!value.empty())
        cfg.set(key, value);
    if (!tau.empty())
      cfg.set("T", tau);
    for (const auto& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos)
        throw std::invalid_argument("--set expects key=value, got '" + s + "'");
      cfg.set(s.substr(0, eq), s.substr(eq + 1));
    }
    return cfg;
  }
};

struct Run
{
  Config cfg;
  std::string name;
  std::vector<std::string> outputs;
  std::vector<std::pair<std::string, double>> timings;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  std::string path(const std::string& suffix)
  {
    std::string p = cfg.get("out") + "_" + suffix;
    outputs.push_back(p);
    return p;
  }
  void finish()
  {
    timings.emplace_back(name, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    const std::string m = cfg.get("out") + "_manifest.txt";
    write_manifest(m, cfg, name, timings, outputs);
  }
};

ScalarField h_field(GridPtr g, const Config& cfg)
{
  const double h0 = cfg.number("h0"), h1 = cfg.number("h1"), R = cfg.number("R");
  if (cfg.get("h_profile") == "const")
    return ScalarField::constant(g, h0);
  return ScalarField::sample(g, [=](const Point& x, double) {
    return h0 + (h1 - h0) * 0.5 * (1 + std::cos(std::numbers::pi * x[0] / R));
  });
}

ScalarField input_field(const Config& cfg)
{
  if (!cfg.get("field").empty())
    return read_field_csv(cfg.get("field"));
  const auto g = make_grid(cfg.grid());
  const auto sol = ManufacturedSolution::by_name(cfg.get("manufactured"), cfg.number("T"));
  return ScalarField::sample(g, sol.value);
}

Cylinder cylinder_of(const Grid& g, const Config& cfg)
{
  const auto v = cfg.list("sub_cylinder");
  if (v.empty()) {
    Cylinder q = Cylinder::of(g);
    q.t0 = 0.0;
    q.t1 = g.horizon();
    return q;
  }
  if (static_cast<int>(v.size()) != 2 * g.dim() + 2)
    throw std::invalid_argument("sub_cylinder dimension does not match the field");
  Point lo = Point::Zero(), hi = Point::Zero();
  for (int a = 0; a < g.dim(); ++a) {
    lo[a] = v[a];
    hi[a] = v[g.dim() + a];
  }
  return Cylinder::box(lo, hi, v[2 * g.dim()], v[2 * g.dim() + 1]);
}

SeminormOptions seminorm_options(const Config& cfg)
{
  SeminormOptions o;
  o.pair_budget = static_cast<std::int64_t>(cfg.number("pair_budget"));
  o.samples = static_cast<std::int64_t>(cfg.number("pair_samples"));
  o.seed = cfg.unsigned_integer("seed");
  o.force_exact = cfg.integer("oracle") != 0;
  return o;
}

const char* regime_name(PairRegime r)
{
  switch (r) {
    case PairRegime::exact:
      return "exact";
    case PairRegime::sampled:
      return "sampled";
    default:
      return "degenerate";
  }
}

void point_columns(std::vector<std::string>& cols, const std::string& prefix, int dim)
{
  cols.push_back(prefix + "x1");
  if (dim == 2)
    cols.push_back(prefix + "x2");
  cols.push_back(prefix + "t");
}

void emit_point(Table& t, const Grid& g, const SpaceTimeNode& n)
{
  const bool ok = n.node >= 0;
  const Point x = ok ? g.position(n.node) : Point::Constant(NAN);
  t << x[0];
  if (g.dim() == 2)
    t << x[1];
  t << (ok ? g.time(n.level) : NAN);
}

// ---------------------------------------------------------------- subcommands

int solve_hj_cmd(Run& run)
{
  const Config& cfg = run.cfg;
  const auto g = make_grid(cfg.grid());
  HJProblem p;
  p.gamma = cfg.number("gamma");
  p.sigma = cfg.number("sigma");
  p.h0 = cfg.number("h0");
  p.h1 = cfg.number("h1");
  p.h = h_field(g, cfg);
  p.q = cfg.number("q") > 0 ? cfg.number("q") : critical_integrability(p.gamma, g->dim());
  const bool manufactured = cfg.get("f_file").empty();
  ManufacturedSolution exact;
  if (manufactured) {
    exact = ManufacturedSolution::by_name(cfg.get("manufactured"), g->horizon());
    p.data = ScalarField::sample(g, exact.value);
    p.f = manufactured_rhs(exact, p);
  } else {
    p.f = read_field_csv(cfg.get("f_file"));
    if (!(p.f.grid().spec() == g->spec()))
      throw std::invalid_argument("f-file grid " + p.f.grid().spec().to_string() + " differs from " +
                                  g->spec().to_string());
    p.f = ScalarField(g, p.f.values());
    p.data = ScalarField(g);
  }
  const HJSolution sol = solve_hj(p);
  write_field(run.path("solution.csv"), sol.u, cfg);
  {
    Table log(run.path("log.csv"), cfg,
              {"level", "t", "substeps", "gradient_bound", "linear_residual", "max_residual"});
    for (const auto& r : sol.log)
      log.row() << r.level << r.t << r.substeps << r.gradient_bound << r.linear_residual << r.max_residual;
  }
  double err = NAN;
  if (manufactured) {
    err = 0.0;
    for (int k = 0; k < g->level_count(); ++k)
      for (int node : g->active_nodes())
        err = std::max(err, std::abs(sol.u(node, k) - exact.value(g->position(node), g->time(k))));
  }
  double res = 0.0;
  for (int node : g->interior_nodes())
    for (int k = 0; k + 1 < g->level_count(); ++k)
      res = std::max(res, std::abs(sol.residual(node, k)));
  Table rep(run.path("report.csv"), cfg, {"dx", "dt", "max_error", "max_residual"});
  rep.row() << g->dx() << g->dt() << err << res;
  return 0;
}

VectorField parse_drift(const std::string& spec, GridPtr g, const Config& cfg)
{
  if (spec == "zero")
    return VectorField(g);
  if (spec.rfind("uniform:", 0) == 0) {
    Point b = Point::Zero();
    std::stringstream ss(spec.substr(8));
    std::string item;
    for (int a = 0; std::getline(ss, item, ','); ++a) {
      if (a > 1)
        throw std::invalid_argument("uniform drift has at most two components");
      char* end = nullptr;
      b[a] = std::strtod(item.c_str(), &end);
      if (item.empty() || end != item.c_str() + item.size())
        throw std::invalid_argument("bad drift component '" + item + "'");
    }
    VectorField v(g);
    for (int k = 0; k < g->level_count(); ++k)
      for (int node : g->active_nodes())
        v.set(node, k, b);
    return v;
  }
  if (spec.rfind("from-solution:", 0) == 0) {
    const ScalarField w = read_field_csv(spec.substr(14));
    if (!(w.grid().spec() == g->spec()))
      throw std::invalid_argument("solution grid " + w.grid().spec().to_string() + " differs from " +
                                  g->spec().to_string());
    return drift_from_solution(ScalarField(g, w.values()), cfg.number("h1"), cfg.number("gamma"));
  }
  throw std::invalid_argument("drift must be zero, uniform:vx[,vy] or from-solution:file");
}

int solve_fp_cmd(Run& run)
{
  const Config& cfg = run.cfg;
  const auto g = make_grid(cfg.grid());
  FPProblem p;
  p.sigma = cfg.number("sigma");
  p.drift = parse_drift(cfg.get("drift"), g, cfg);
  p.source = cfg.point("source");
  const FPSolution sol = solve_fp(p);
  write_field(run.path("density.csv"), sol.m, cfg);
  double min_m = 0.0;
  {
    Table t(run.path("mass.csv"), cfg, {"level", "t", "mass", "outflux", "total"});
    for (int k = 0; k < g->level_count(); ++k) {
      t.row() << k << g->time(k) << sol.mass[k] << sol.outflux[k] << sol.mass[k] + sol.outflux[k];
      for (int node : g->active_nodes())
        min_m = std::min(min_m, sol.m(node, k));
    }
  }
  const double gamma = cfg.number("gamma");
  const double tau = g->horizon();
  const int last = g->level_count() - 1;
  const MomentReport mom = moment_alpha(sol, cfg.number("alpha"), last);
  const BoundaryLossReport bl = boundary_loss_check(sol, gamma);
  DensityNormReport dn;
  dn.norm = dn.fitted = NAN;
  if (g->half_width() * g->half_width() >= tau * p.sigma)
    dn = m_norm_bound_check(sol, gamma);
  Table t(run.path("functionals.csv"), cfg,
          {"kinetic", "moment", "moment_fitted", "outflux", "boundary_fitted", "density_norm", "density_fitted",
           "max_conservation_error", "min_density"});
  t.row() << kinetic_energy(sol, conjugate_exponent(gamma)) << mom.moment << mom.fitted << bl.outflux << bl.fitted
          << dn.norm << dn.fitted << sol.max_conservation_error << min_m;
  if (sol.max_conservation_error > 1e-8 || min_m < 0.0)
    throw VerificationFailure("mass + outflux drifted by " + num(sol.max_conservation_error));
  return 0;
}

int seminorm_cmd(Run& run)
{
  const Config& cfg = run.cfg;
  const ScalarField u = input_field(cfg);
  const Grid& g = u.grid();
  const Cylinder q = cylinder_of(g, cfg);
  const double alpha = cfg.number("alpha"), gamma = cfg.number("gamma"), z = cfg.number("z"), c = cfg.number("c");
  const SeminormOptions opts = seminorm_options(cfg);
  std::vector<std::string> cols{"seminorm", "value", "regime", "pairs"};
  point_columns(cols, "first_", g.dim());
  point_columns(cols, "second_", g.dim());
  cols.push_back("argmax_on_boundary");
  Table t(run.path("seminorm.csv"), cfg, cols);
  auto emit = [&](const std::string& name, const SeminormValue& v) {
    t.row() << name << v.value << std::string(regime_name(v.regime)) << static_cast<double>(v.pairs);
    emit_point(t, g, v.first);
    emit_point(t, g, v.second);
    t << (v.argmax_on_boundary ? 1 : 0);
  };
  emit("classical", holder_seminorm(u, alpha, q, opts));
  emit("weighted", weighted_holder(u, alpha, c, q, opts));
  emit("nl_space", nonlinear_space(u, alpha, gamma, q, opts));
  emit("nl_time", nonlinear_time(u, alpha, gamma, q, opts));
  emit("nl_combined", nonlinear_combined(u, alpha, z, gamma, q, opts));
  return 0;
}

GridSpec refined(GridSpec s, int level)
{
  s.dx /= std::ldexp(1.0, level);
  s.dt /= std::ldexp(1.0, level);
  return s;
}

double fitted_slope(const std::vector<double>& h, const std::vector<double>& e)
{
  return acceptance::fitted_order(h, e);
}

int verify_duality_cmd(Run& run)
{
  const Config& cfg = run.cfg;
  const double gamma = cfg.number("gamma"), sigma = cfg.number("sigma");
  const double h0 = cfg.number("h0"), h1 = cfg.number("h1");
  const Point y0 = cfg.point("y0");
  const GridSpec base = cfg.grid();
  const auto exact =
    ManufacturedSolution::separable_sine(0.5, std::numbers::pi / (2 * base.half_width), 0.5, base.horizon);
  const double ell0 = lagrangian_coefficient(h0, gamma);
  Table t(run.path("duality.csv"), cfg,
          {"level", "dx", "dt", "lhs", "lagrangian", "running_cost", "terminal", "boundary", "residual", "bent_lhs",
           "bent_lagrangian", "bent_running_cost", "bent_terminal", "bent_boundary", "bent_slack", "fitted_C"});
  std::vector<double> hs, res, C;
  for (int level = 0; level < cfg.integer("levels"); ++level) {
    const GridSpec s = refined(base, level);
    const auto g = make_grid(s);
    const auto p = manufactured_problem(exact, g, gamma, sigma, h1);
    const auto w = solve_hj(p).u;
    const auto m = solve_fp({sigma, drift_from_solution(w, h1, gamma), Point::Zero()});
    const auto rep = duality_identity(w, p.f, p.h, m, gamma, h0, h1);

    GridSpec sp = s;
    sp.half_width = s.half_width + std::ceil(y0.cwiseAbs().maxCoeff() / s.dx - 1e-9) * s.dx;
    const auto gp = make_grid(sp);
    const auto pp = manufactured_problem(exact, gp, gamma, sigma, h1);
    const auto wp = solve_hj(pp).u;
    const auto mp = solve_fp({sigma, drift_from_solution(resample(wp, g), h1, gamma), Point::Zero()});
    const auto b = bent_duality(wp, pp.f, mp, y0, gamma, ell0);
    const double fitted = std::max(0.0, -b.slack) / (s.dx + s.dt);
    t.row() << level << s.dx << s.dt << rep.lhs << rep.lagrangian << rep.running_cost << rep.terminal << rep.boundary
            << rep.residual << b.lhs << b.lagrangian << b.running_cost << b.terminal << b.boundary << b.slack
            << fitted;
    hs.push_back(s.dx);
    res.push_back(std::max(std::abs(rep.residual), 1e-300));
    C.push_back(fitted);
  }
  const double order = fitted_slope(hs, res);
  for (size_t k = 1; k < C.size(); ++k)
    if (!(C[k] <= 1.5 * C[k - 1] + 1e-12))
      throw VerificationFailure("bent slack constant grows under refinement: " + num(C[k - 1]) + " -> " + num(C[k]));
  if (order < 0.9)
    throw VerificationFailure("duality residual order " + num(order) + " below 0.9");
  return 0;
}

int verify_oscillation_cmd(Run& run)
{
  const Config& cfg = run.cfg;
  OscillationInputs in;
  in.sigma = cfg.number("sigma");
  in.h0 = cfg.number("h0");
  in.h1 = cfg.number("h1");
  in.gamma = cfg.number("gamma");
  in.alpha = cfg.number("alpha");
  in.z = cfg.number("z");
  in.R = cfg.number("R");
  in.tau = cfg.number("T");
  in.y0 = cfg.point("y0");
  in.f0 = cfg.number("f0");
  in.c1 = cfg.number("c1");
  const double L = in.R + 1;
  const double A = cfg.number("amplitude") / (2 * in.tau * L);
  const auto w = ManufacturedSolution::separable_sine(A, std::numbers::pi / (2 * L), 0.0, 2 * in.tau);
  Table t(run.path("oscillation.csv"), cfg,
          {"level", "dx", "dt", "test0_lhs", "test0_rhs", "C2", "xest0_lhs", "xest0_rhs", "C3", "K", "fnorm", "shape",
           "space_quotient", "time_quotient"});
  std::vector<double> C2, C3;
  for (int level = 0; level < cfg.integer("levels"); ++level) {
    GridSpec s = refined(cfg.grid(), level);
    s.half_width = L;
    s.horizon = in.tau;
    const auto g = make_grid(s);
    HJProblem p;
    p.gamma = in.gamma;
    p.sigma = in.sigma;
    p.h = ScalarField::constant(g, in.h1);
    const ScalarField ws = ScalarField::sample(g, w.value);
    const ScalarField gs = manufactured_rhs(w, p);
    const auto o = oscillation_report(ws, gs, in);
    t.row() << level << s.dx << s.dt << o.test0_lhs << o.test0_rhs << o.C2 << o.xest0_lhs << o.xest0_rhs << o.C3
            << o.K << o.fnorm << o.shape << o.space_quotient << o.time_quotient;
    C2.push_back(o.C2);
    C3.push_back(o.C3);
  }
  for (size_t k = 0; k < C2.size(); ++k) {
    if (!std::isfinite(C2[k]) || !std::isfinite(C3[k]))
      throw VerificationFailure("fitted constant is not finite");
    if (k > 0 && (C2[k] > 2 * C2[k - 1] + 1e-12 || C3[k] > 2 * C3[k - 1] + 1e-12))
      throw VerificationFailure("fitted constant more than doubles under refinement");
  }
  return 0;
}

int ldiff_cmd(Run& run)
{
  const Config& cfg = run.cfg;
  Table t(run.path("ldiff.csv"), cfg, {"gamma_prime", "samples", "fitted", "cap", "within_cap"});
  bool ok = true;
  for (double gp : cfg.list("gamma_prime_list")) {
    const double C = ldiff_constant(gp, cfg.integer("samples"), cfg.unsigned_integer("seed"));
    const double cap = ldiff_cap(gp);
    const bool within = std::isfinite(C) && C <= cap;
    ok = ok && within;
    t.row() << gp << cfg.integer("samples") << C << cap << (within ? 1 : 0);
  }
  if (!ok)
    throw VerificationFailure("ldiff constant exceeds its cap");
  return 0;
}

int blowup_cmd(Run& run)
{
  const Config& cfg = run.cfg;
  const ScalarField u = input_field(cfg);
  const Grid& g = u.grid();
  const Cylinder q = cylinder_of(g, cfg);
  const double z = cfg.number("z");
  const auto kind = cfg.get("selection") == "weighted" ? SelectionKind::weighted_classical : SelectionKind::nonlinear;
  const BlowupParams p =
    worst_pair_selection(u, kind, cfg.number("alpha"), z, cfg.number("gamma"), q, seminorm_options(cfg));
  const double norm = normalization_check(u, p);
  const double expected = p.selection_case == 'b' ? z : 1.0;
  std::vector<std::string> cols{"case", "variant", "xbar1"};
  if (g.dim() == 2)
    cols.push_back("xbar2");
  for (const char* c : {"tbar", "M", "r", "d", "L", "quotient", "scaled_form", "time_scale", "sigma_n", "theta_n",
                        "y0_1", "y0_2", "s0", "normalization", "expected_normalization"})
    cols.emplace_back(c);
  Table t(run.path("blowup.csv"), cfg, cols);
  t.row() << std::string(1, p.selection_case)
          << std::string(p.variant == BlowupVariant::alpha0 ? "alpha0" : "alpha") << p.xbar[0];
  if (g.dim() == 2)
    t << p.xbar[1];
  t << p.tbar << p.M << p.r << p.d << p.L << p.quotient << p.scaled_form << p.time_scale() << p.sigma_n()
    << p.theta_n() << p.y0[0] << p.y0[1] << p.s0 << norm << expected;
  if (!(p.L <= p.quotient && p.quotient <= 2 * p.L))
    throw VerificationFailure("selected pair violates L <= quotient <= 2L");
  if (std::abs(norm - expected) > 1e-12)
    throw VerificationFailure("normalization " + num(norm) + " differs from " + num(expected));
  return 0;
}

int liouville_cmd(Run& run)
{
  const Config& cfg = run.cfg;
  LiouvilleConfig c;
  c.dim = cfg.integer("dim");
  c.h = cfg.number("h1");
  c.gamma = cfg.number("gamma");
  c.alpha = cfg.number("alpha");
  c.z = cfg.number("z");
  c.amplitude = cfg.number("amplitude");
  c.dx = cfg.number("dx");
  c.dt = cfg.number("dt");
  c.R_list = cfg.list("R_list");
  c.tau_list = cfg.list("tau_list");
  const auto rows = liouville_probe(c);
  Table t(run.path("liouville.csv"), cfg,
          {"R", "tau", "budget", "oscillation", "xest0_lhs", "xest0_rhs", "C3", "K", "status"});
  bool ok = true;
  for (size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    t.row() << r.R << r.tau << r.budget << r.oscillation << r.xest0_lhs << r.xest0_rhs << r.C3 << r.K << r.status;
    if (i > 0 && rows[i - 1].R == r.R && rows[i - 1].tau < r.tau)
      ok = ok && r.budget < rows[i - 1].budget && r.oscillation <= 1.05 * rows[i - 1].oscillation;
  }
  if (!ok)
    throw VerificationFailure("budget or oscillation does not decay along the tau ladder");
  return 0;
}

int maxreg_cmd(Run& run)
{
  const Config& cfg = run.cfg;
  MaxregConfig c;
  c.dim = cfg.integer("dim");
  c.gamma = cfg.number("gamma");
  c.R = cfg.number("R");
  c.T = cfg.number("T");
  c.t_singular = cfg.number("t_singular");
  c.dt_factor = cfg.number("dt_factor");
  c.q_list = cfg.list("q_list");
  c.eps_list = cfg.list("eps_list");
  c.dx_list = cfg.list("dx_list");
  const auto sub = cfg.list("sub_cylinder");
  if (!sub.empty()) {
    const auto g = make_grid(cfg.grid());
    c.sub = cylinder_of(*g, cfg);
  } else {
    const double hw = c.R / 2;
    c.sub = Cylinder::box(Point(-hw, c.dim == 2 ? -hw : 0.0), Point(hw, c.dim == 2 ? hw : 0.0), c.T / 4,
                          3 * c.T / 4);
  }
  const auto rows = maxreg_sweep(c);
  Table t(run.path("maxreg.csv"), cfg,
          {"q", "epsilon", "dx", "f_norm", "dtu_norm", "hessian_norm", "gradient_power_norm", "ratio", "status"});
  for (const auto& r : rows)
    t.row() << r.q << r.eps << r.dx << r.f_norm << r.dtu << r.hessian << r.gradient_power << r.ratio << r.status;
  return 0;
}

int selftest_cmd(Run& run)
{
  Table t(run.path("selftest.csv"), run.cfg, {"criterion", "name", "passed"});
  int failed = 0;
  for (const auto& c : acceptance::criteria()) {
    const auto o = acceptance::run(c);
    std::printf("[%s] criterion %s: %s (%.2fs) %s\n", o.passed ? "PASS" : "FAIL", c.id.c_str(), o.name.c_str(),
                o.seconds, o.detail.c_str());
    std::fflush(stdout);
    t.row() << c.id << o.name << (o.passed ? 1 : 0);
    failed += !o.passed;
  }
  if (failed)
    throw VerificationFailure(std::to_string(failed) + " acceptance criteria failed");
  return 0;
}

int report_failure(const char* kind, int code, const std::string& message, const std::string& out)
{
  std::cerr << "status=" << kind << " exit=" << code << " message=\"" << message << "\"\n";
  if (!out.empty()) {
    std::ofstream f(out + "_failure.txt");
    f << "status=" << kind << "\nexit=" << code << "\nmessage=" << message << '\n';
  }
  return code;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Viscous Hamilton-Jacobi regularity lab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", tool_version());

  Overrides ov;
  std::string out;
  std::string chosen;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", ov.config_file, "key=value configuration file");
    sub->add_option("--set", ov.sets, "override one key (key=value), repeatable");
    sub->add_option("--out", *ov.flag("out"), "output prefix");
    sub->add_option("--seed", *ov.flag("seed"), "random seed");
    sub->callback([&chosen, sub] { chosen = sub->get_name(); });
  };
  auto physics = [&](CLI::App* sub) {
    sub->add_option("--gamma", *ov.flag("gamma"), "Hamiltonian exponent (> 2)");
    sub->add_option("--sigma", *ov.flag("sigma"), "diffusion coefficient in (0, 1]");
    sub->add_option("--h0", *ov.flag("h0"), "lower bound of h");
    sub->add_option("--h1", *ov.flag("h1"), "upper bound of h");
    sub->add_option("--grid", ov.grid, "N,R,dx,T,dt[,box|ball]");
  };
  auto holder = [&](CLI::App* sub) {
    sub->add_option("--alpha", *ov.flag("alpha"), "Holder exponent");
    sub->add_option("--z", *ov.flag("z"), "time-part scale z");
  };

  auto* hj = app.add_subcommand("solve-hj", "solve the viscous Hamilton-Jacobi equation");
  common(hj);
  physics(hj);
  hj->add_option("--h-profile", *ov.flag("h_profile"), "const or cosine")->check(CLI::IsMember({"const", "cosine"}));
  auto* ff = hj->add_option("--f-file", *ov.flag("f_file"), "right-hand side as a field CSV");
  hj->add_option("--manufactured", *ov.flag("manufactured"), "constant, linear or sine")->excludes(ff);
  hj->add_option("--q", *ov.flag("q"), "integrability exponent of f (0 selects q0)");

  auto* fp = app.add_subcommand("solve-fp", "solve the dual Fokker-Planck equation");
  common(fp);
  physics(fp);
  fp->add_option("--drift", *ov.flag("drift"), "zero, uniform:vx[,vy] or from-solution:file");
  fp->add_option("--R", *ov.flag("R"), "half width");
  fp->add_option("--tau", ov.tau, "horizon");
  fp->add_option("--source", *ov.flag("source"), "source point x1[,x2]");
  fp->add_option("--alpha", *ov.flag("alpha"), "moment exponent");

  auto* sn = app.add_subcommand("seminorm", "discrete Holder seminorms of a field");
  common(sn);
  holder(sn);
  sn->add_option("--gamma", *ov.flag("gamma"), "Hamiltonian exponent (> 2)");
  sn->add_option("--c", *ov.flag("c"), "weight exponent");
  sn->add_option("--sub-cylinder", *ov.flag("sub_cylinder"), "lo..,hi..,t0,t1");
  sn->add_option("--field", *ov.flag("field"), "field CSV (default: manufactured sample)");
  sn->add_option("--grid", ov.grid, "grid for the manufactured sample");
  sn->add_flag("--oracle{1}", *ov.flag("oracle"), "enumerate every pair");

  auto* vd = app.add_subcommand("verify-duality", "duality identity and bent upper bound under refinement");
  common(vd);
  physics(vd);
  vd->add_option("--y0", *ov.flag("y0"), "bend target y0");
  vd->add_option("--levels", *ov.flag("levels"), "number of dyadic levels");

  auto* vo = app.add_subcommand("verify-oscillation", "oscillation budgets on a manufactured pair");
  common(vo);
  physics(vo);
  holder(vo);
  vo->add_option("--R", *ov.flag("R"), "radius");
  vo->add_option("--tau", ov.tau, "horizon");
  vo->add_option("--y0", *ov.flag("y0"), "shift y0 (|y0| <= 1)");
  vo->add_option("--levels", *ov.flag("levels"), "number of dyadic levels");

  auto* ld = app.add_subcommand("ldiff", "sampled constant of the power-difference inequality");
  common(ld);
  ld->add_option("--gamma-prime", *ov.flag("gamma_prime_list"), "comma-separated list in (1, 2)");
  ld->add_option("--samples", *ov.flag("samples"), "samples per exponent");

  auto* bu = app.add_subcommand("blowup", "worst-pair selection and normalization");
  common(bu);
  holder(bu);
  bu->add_option("--gamma", *ov.flag("gamma"), "Hamiltonian exponent (> 2)");
  bu->add_option("--field", *ov.flag("field"), "field CSV (default: manufactured sample)");
  bu->add_option("--grid", ov.grid, "grid for the manufactured sample");
  bu->add_option("--selection", *ov.flag("selection"), "nonlinear or weighted");
  bu->add_option("--sub-cylinder", *ov.flag("sub_cylinder"), "lo..,hi..,t0,t1");

  auto* lp = app.add_subcommand("liouville-probe", "budget and oscillation decay along a tau ladder");
  common(lp);
  holder(lp);
  lp->add_option("--gamma", *ov.flag("gamma"), "Hamiltonian exponent (> 2)");
  lp->add_option("--h-const", *ov.flag("h1"), "constant h");
  lp->add_option("--R", *ov.flag("R_list"), "comma-separated radii");
  lp->add_option("--tau", *ov.flag("tau_list"), "comma-separated horizons");
  lp->add_option("--dx", *ov.flag("dx"), "space step");
  lp->add_option("--dt", *ov.flag("dt"), "time step");

  auto* mr = app.add_subcommand("sweep-maxreg", "maximal regularity sweep over a singular family");
  common(mr);
  mr->add_option("--gamma", *ov.flag("gamma"), "Hamiltonian exponent (> 2)");
  mr->add_option("--q", *ov.flag("q_list"), "comma-separated integrability exponents");
  mr->add_option("--eps", *ov.flag("eps_list"), "comma-separated truncation levels");
  mr->add_option("--dx", *ov.flag("dx_list"), "comma-separated space steps");

  auto* st = app.add_subcommand("selftest", "run the acceptance suite");
  common(st);

  if (argc > 1 && argv[1][0] != '-') {
    bool known = false;
    for (const auto* sub : app.get_subcommands({}))
      known = known || sub->get_name() == argv[1];
    if (!known) {
      std::cerr << "unknown subcommand '" << argv[1] << "'\n\n" << app.help();
      return 2;
    }
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return 2;
  }

  Run run;
  try {
    run.cfg = ov.resolve();
  } catch (const std::exception& e) {
    return report_failure("usage_error", 2, e.what(), "");
  }
  run.name = chosen;
  const std::string prefix = run.cfg.get("out");
  try {
    int rc = 0;
    try {
      if (chosen == "solve-hj")
        rc = solve_hj_cmd(run);
      else if (chosen == "solve-fp")
        rc = solve_fp_cmd(run);
      else if (chosen == "seminorm")
        rc = seminorm_cmd(run);
      else if (chosen == "verify-duality")
        rc = verify_duality_cmd(run);
      else if (chosen == "verify-oscillation")
        rc = verify_oscillation_cmd(run);
      else if (chosen == "ldiff")
        rc = ldiff_cmd(run);
      else if (chosen == "blowup")
        rc = blowup_cmd(run);
      else if (chosen == "liouville-probe")
        rc = liouville_cmd(run);
      else if (chosen == "sweep-maxreg")
        rc = maxreg_cmd(run);
      else
        rc = selftest_cmd(run);
    } catch (const VerificationFailure&) {
      run.finish();
      throw;
    }
    run.finish();
    return rc;
  } catch (const VerificationFailure& e) {
    return report_failure("verification_failure", 1, e.what(), prefix);
  } catch (const NumericalError& e) {
    return report_failure("numerical_failure", 3, e.what(), prefix);
  } catch (const std::invalid_argument& e) {
    return report_failure("usage_error", 2, e.what(), prefix);
  } catch (const std::out_of_range& e) {
    return report_failure("usage_error", 2, e.what(), prefix);
  } catch (const std::exception& e) {
    return report_failure("numerical_failure", 3, e.what(), prefix);
  }
}
