#include "vhj/acceptance.hpp"

#include "vhj/dual.hpp"
#include "vhj/exponents.hpp"
#include "vhj/fp.hpp"
#include "vhj/hj.hpp"
#include "vhj/oracles.hpp"
#include "vhj/quadrature.hpp"
#include "vhj/scalelab.hpp"
#include "vhj/seminorm.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>

namespace vhj::acceptance {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double v)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

GridPtr grid_of(int dim, double R, double dx, double T, double dt, bool ball = false)
{
  GridSpec s;
  s.dim = dim;
  s.half_width = R;
  s.dx = dx;
  s.horizon = T;
  s.dt = dt;
  s.ball = ball;
  return make_grid(s);
}

double conservation_gap(const FPSolution& sol)
{
  double worst = 0.0;
  for (int k = 0; k < sol.mass.size(); ++k)
    worst = std::max(worst, std::abs(sol.mass[k] + sol.outflux[k] - 1.0));
  return worst;
}

double min_density(const FPSolution& sol)
{
  double lo = 0.0;
  for (int k = 0; k < sol.grid().level_count(); ++k)
    for (int node : sol.grid().active_nodes())
      lo = std::min(lo, sol.m(node, k));
  return lo;
}

VectorField uniform_drift(GridPtr g, const Point& b)
{
  VectorField v(g);
  for (int k = 0; k < g->level_count(); ++k)
    for (int node : g->active_nodes())
      v.set(node, k, b);
  return v;
}

} // namespace

double fitted_order(const std::vector<double>& h, const std::vector<double>& err)
{
  const size_t n = h.size();
  double mx = 0, my = 0;
  for (size_t i = 0; i < n; ++i) {
    mx += std::log(h[i]);
    my += std::log(err[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (size_t i = 0; i < n; ++i) {
    const double dx = std::log(h[i]) - mx;
    sxy += dx * (std::log(err[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

Outcome manufactured_convergence()
{
  Outcome o;
  o.name = "manufactured HJ convergence";
  const auto t0 = Clock::now();
  const auto exact = ManufacturedSolution::separable_sine(1.0, std::numbers::pi, 0.0, 1.0);
  std::vector<double> hs, errs;
  std::ostringstream d;
  for (double dx : {1.0 / 32, 1.0 / 64, 1.0 / 128}) {
    auto g = grid_of(1, 1.0, dx, 1.0, dx / 4);
    const auto sol = solve_hj(manufactured_problem(exact, g, 3.0, 1.0, 1.0));
    double err = 0.0;
    for (int k = 0; k < g->level_count(); ++k)
      for (int node : g->active_nodes())
        err = std::max(err, std::abs(sol.u(node, k) - exact.value(g->position(node), g->time(k))));
    hs.push_back(dx);
    errs.push_back(err);
    d << "err(dx=" << dx << ")=" << fmt("%.3e", err) << " ";
  }
  const double order = fitted_order(hs, errs);
  const double secs = since(t0);
  o.passed = order >= 0.9 && secs < 120.0;
  d << "order=" << fmt("%.3f", order) << " runtime=" << fmt("%.2f", secs) << "s";
  o.detail = d.str();
  return o;
}

Outcome fp_conservation()
{
  Outcome o;
  o.name = "Fokker-Planck conservation";
  struct Run
  {
    const char* label;
    FPProblem p;
  };
  std::vector<Run> runs;
  {
    auto g = grid_of(1, 2.0, 1.0 / 16, 1.0, 1.0 / 64);
    runs.push_back({"1d heat", {1.0, VectorField(g), Point(0.3, 0.0)}});
  }
  {
    auto g = grid_of(2, 2.0, 1.0 / 8, 1.0, 1.0 / 32);
    runs.push_back({"2d heat", {0.5, VectorField(g), Point(0.5, -0.25)}});
  }
  {
    auto g = grid_of(1, 1.0, 1.0 / 32, 1.0, 1.0 / 128);
    runs.push_back({"1d drift", {1.0, uniform_drift(g, Point(0.7, 0.0)), Point::Zero()}});
  }
  {
    auto g = grid_of(2, 2.0, 1.0 / 8, 1.0, 1.0 / 32, true);
    runs.push_back({"2d ball drift", {1.0, uniform_drift(g, Point(-0.5, 0.3)), Point::Zero()}});
  }
  {
    auto g = grid_of(1, 1.0, 1.0 / 32, 1.0, 1.0 / 128);
    const auto w = ManufacturedSolution::separable_sine(0.5, std::numbers::pi / 2, 0.5, 1.0);
    const auto sol = solve_hj(manufactured_problem(w, g, 3.0, 1.0, 1.0));
    runs.push_back({"hj drift", {1.0, drift_from_solution(sol.u, 1.0, 3.0), Point::Zero()}});
  }
  double worst_gap = 0.0, worst_min = 0.0;
  std::ostringstream d;
  for (const auto& r : runs) {
    const auto sol = solve_fp(r.p);
    const double gap = conservation_gap(sol);
    const double lo = min_density(sol);
    worst_gap = std::max(worst_gap, gap);
    worst_min = std::min(worst_min, lo);
    d << r.label << ": gap=" << fmt("%.2e", gap) << " ";
  }
  o.passed = worst_gap <= 1e-8 && worst_min >= 0.0;
  d << "min m=" << fmt("%.3g", worst_min);
  o.detail = d.str();
  return o;
}

Outcome heat_kernel_regression()
{
  Outcome o;
  o.name = "heat kernel regression";
  std::ostringstream d;
  bool ok = true;
  for (int dim : {1, 2}) {
    auto g = grid_of(dim, 8.0, 1.0 / 8, 1.0, 1.0 / 64);
    const auto sol = solve_fp({1.0, VectorField(g), Point::Zero()});
    const int last = g->level_count() - 1;
    double num = 0.0, den = 0.0;
    for (int node : g->active_nodes()) {
      const double ref = oracle::box_heat_kernel(g->position(node), Point::Zero(), 1.0, 1.0, 8.0, dim);
      num += std::abs(sol.m(node, last) - ref);
      den += std::abs(ref);
    }
    const double rel = num / den;
    ok = ok && rel <= 0.02;
    d << dim << "d relative L1 gap=" << fmt("%.4f", rel) << " ";
  }
  o.passed = ok;
  o.detail = d.str();
  return o;
}

Outcome duality_convergence()
{
  Outcome o;
  o.name = "duality identity";
  const double gamma = 3.0;
  const auto exact = ManufacturedSolution::separable_sine(0.5, std::numbers::pi / 2, 0.5, 1.0);
  const double ell0 = lagrangian_coefficient(1.0, gamma);
  const std::vector<Point> shifts{Point(1.0, 0.0), Point(0.5, 0.0), Point::Zero()};
  std::vector<double> hs, res;
  std::vector<std::vector<double>> C(shifts.size());
  std::ostringstream d;
  for (double dx : {1.0 / 16, 1.0 / 32, 1.0 / 64}) {
    const double dt = dx / 4;
    auto g = grid_of(1, 1.0, dx, 1.0, dt);
    const auto p = manufactured_problem(exact, g, gamma, 1.0, 1.0);
    const auto w = solve_hj(p).u;
    const auto m = solve_fp({1.0, drift_from_solution(w, 1.0, gamma), Point::Zero()});
    const auto rep = duality_identity(w, p.f, p.h, m, gamma, 1.0, 1.0);
    hs.push_back(dx);
    res.push_back(std::abs(rep.residual));

    auto gp = grid_of(1, 2.0, dx, 1.0, dt);
    const auto pp = manufactured_problem(exact, gp, gamma, 1.0, 1.0);
    const auto wp = solve_hj(pp).u;
    const auto mp = solve_fp({1.0, drift_from_solution(resample(wp, g), 1.0, gamma), Point::Zero()});
    for (size_t s = 0; s < shifts.size(); ++s) {
      const auto b = bent_duality(wp, pp.f, mp, shifts[s], gamma, ell0);
      C[s].push_back(std::max(0.0, -b.slack) / (dx + dt));
    }
    d << "res(dx=" << dx << ")=" << fmt("%.3e", rep.residual) << " ";
  }
  const double order = fitted_order(hs, res);
  bool stable = true;
  for (size_t s = 0; s < shifts.size(); ++s) {
    for (size_t k = 1; k < C[s].size(); ++k)
      stable = stable && std::isfinite(C[s][k]) && C[s][k] <= 1.5 * C[s][k - 1] + 1e-12;
    d << "C(y0=" << shifts[s][0] << ")=" << fmt("%.3g", C[s].front()) << ".." << fmt("%.3g", C[s].back()) << " ";
  }
  o.passed = order >= 0.9 && stable;
  d << "order=" << fmt("%.3f", order);
  o.detail = d.str();
  return o;
}

Outcome seminorm_oracle()
{
  Outcome o;
  o.name = "seminorm oracle equivalence";
  std::mt19937_64 rng(271828);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  int fields = 0, mismatches = 0;
  std::ostringstream d;
  for (int trial = 0; trial < 24; ++trial) {
    const int dim = trial % 3 == 2 ? 2 : 1;
    const int n = dim == 1 ? 9 + 2 * static_cast<int>(U(rng) * 16) : 5 + 2 * static_cast<int>(U(rng) * 5);
    const int levels = dim == 1 ? 5 + static_cast<int>(U(rng) * 37) : 3 + static_cast<int>(U(rng) * 7);
    const double dx = trial % 2 ? 0.125 : 0.0625;
    const double dt = trial % 3 ? 0.03125 : 0.0625;
    const double R = dx * (n - 1) / 2;
    const double T = dt * (levels - 1);
    auto g = grid_of(dim, R, dx, T, dt, dim == 2 && trial % 2 == 0);
    if (static_cast<long>(g->node_count()) * g->level_count() > 10000)
      continue;
    const double k1 = 1 + 4 * U(rng), phase = 6 * U(rng);
    auto u = ScalarField::sample(g, [&](const Point& x, double t) {
      return std::sin(k1 * x[0] + phase) * std::cos(x[1] - t) + 0.3 * t * t;
    });
    for (int node : g->active_nodes())
      for (int k = 0; k < g->level_count(); ++k)
        u(node, k) += 0.2 * (U(rng) - 0.5);

    Cylinder q = Cylinder::of(*g);
    q.t0 = 0.0;
    q.t1 = T;
    if (trial % 4 == 3) {
      q = Cylinder::box(Point(-R / 2, dim == 2 ? -R / 2 : 0.0), Point(R * 0.8, dim == 2 ? R * 0.8 : 0.0), T * 0.1,
                        T * 0.9);
    }
    const double alpha = 0.1 + 0.8 * U(rng);
    const double gamma = 2.2 + 3 * U(rng);
    const double c = U(rng);
    const double z = 0.5 + 1.5 * U(rng);

    const auto set = compute_seminorms(u, alpha, c, z, gamma, q);
    const auto cl = oracle::classical(u, alpha, 0.0, q);
    const auto wt = oracle::classical(u, alpha, c, q);
    const auto sx = oracle::nl_space(u, alpha, gamma, q);
    const auto st = oracle::nl_time(u, alpha, gamma, q);
    auto same = [](const SeminormValue& a, const oracle::NaiveSeminorm& b) {
      return a.value == b.value && a.first.node == b.first.node && a.first.level == b.first.level &&
             a.second.node == b.second.node && a.second.level == b.second.level;
    };
    const bool ok = same(set.classical, cl) && same(set.weighted, wt) && same(set.nl_space, sx) &&
                    same(set.nl_time, st) && set.nl_combined == combine_nonlinear(sx.value, st.value, z, gamma);
    ++fields;
    if (!ok) {
      ++mismatches;
      d << "mismatch on field " << trial << " ";
    }
  }
  o.passed = fields >= 20 && mismatches == 0;
  d << fields << " fields, " << mismatches << " mismatches";
  o.detail = d.str();
  return o;
}

Outcome ldiff_cap()
{
  Outcome o;
  o.name = "ldiff cap";
  const auto t0 = Clock::now();
  bool ok = true;
  std::ostringstream d;
  for (double gp : {1.1, 1.3, 1.5, 1.7, 1.9}) {
    const double C = ldiff_constant(gp, 100000, 1234);
    const double cap = vhj::ldiff_cap(gp);
    ok = ok && std::isfinite(C) && C <= cap;
    d << "g'=" << gp << ": " << fmt("%.4f", C) << "<=" << fmt("%.4f", cap) << " ";
  }
  const double secs = since(t0);
  o.passed = ok && secs < 10.0;
  d << "runtime=" << fmt("%.2f", secs) << "s";
  o.detail = d.str();
  return o;
}

Outcome legendre_gap()
{
  Outcome o;
  o.name = "Legendre gap";
  std::mt19937_64 rng(314159);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::normal_distribution<double> G;
  bool ok = true;
  std::ostringstream d;
  for (auto [h, gamma] : {std::pair{1.0, 3.0}, std::pair{1.0, 4.0}, std::pair{2.0, 3.0}}) {
    std::vector<Eigen::VectorXd> ps;
    for (int i = 0; i < 100; ++i) {
      Eigen::VectorXd p(1 + i % 3);
      for (int a = 0; a < p.size(); ++a)
        p[a] = G(rng);
      p *= 2.0 * U(rng) / std::max(p.norm(), 1e-300);
      ps.push_back(p);
    }
    const double gap = vhj::legendre_gap(h, gamma, ps);
    ok = ok && gap < 1e-6;
    d << "(h=" << h << ",gamma=" << gamma << ") gap=" << fmt("%.2e", gap) << " ";
  }
  o.passed = ok;
  o.detail = d.str();
  return o;
}

Outcome liouville_decay()
{
  Outcome o;
  o.name = "Liouville decay";
  bool ok = true;
  std::ostringstream d;
  int decreasing = 0;
  for (double alpha : {0.1, 0.3, 0.5, 0.7, 0.9})
    for (double gamma : {2.5, 3.0, 4.0, 6.0, 10.0}) {
      const double b4 = liouville_budget(4, alpha, gamma);
      const double b16 = liouville_budget(16, alpha, gamma);
      const double b64 = liouville_budget(64, alpha, gamma);
      if (b4 > b16 && b16 > b64)
        ++decreasing;
    }
  ok = decreasing == 25;
  d << decreasing << "/25 budgets decreasing; ";
  const auto rows = liouville_probe(LiouvilleConfig{});
  for (size_t i = 0; i < rows.size(); ++i) {
    d << "osc(tau=" << rows[i].tau << ")=" << fmt("%.4f", rows[i].oscillation) << " ";
    ok = ok && std::isfinite(rows[i].oscillation) && rows[i].status != "failed";
    if (i > 0)
      ok = ok && rows[i].oscillation <= 1.05 * rows[i - 1].oscillation;
  }
  o.passed = ok;
  o.detail = d.str();
  return o;
}

Outcome exponent_identities()
{
  Outcome o;
  o.name = "exponent identities";
  std::mt19937_64 rng(161803);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  double worst = 0.0;
  auto rel = [](double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); };
  for (int i = 0; i < 200; ++i) {
    const double gamma = 2.0 + 0.01 + 18 * U(rng);
    const int N = 1 + i % 3;
    const double gp = conjugate_exponent(gamma);
    worst = std::max(worst, rel(critical_integrability(gamma, N) * gp, N + 2.0));
    worst = std::max(worst, rel(critical_holder(gamma), 2.0 - gp));
    const double e = 2.0 / gamma + critical_holder(gamma) * (gamma - 1) / gamma;
    for (int j = 0; j < 20; ++j) {
      const double M = std::pow(10.0, -3 + 6 * U(rng));
      worst = std::max(worst, rel(std::pow(M, e), M));
    }
  }
  o.passed = worst <= 1e-12;
  o.detail = "max relative defect " + fmt("%.3e", worst);
  return o;
}

Outcome maxreg_smoke()
{
  Outcome o;
  o.name = "maxreg sweep";
  const auto t0 = Clock::now();
  const auto rows = maxreg_sweep(MaxregConfig{});
  const double secs = since(t0);
  double lo = INFINITY, hi = 0.0;
  int critical_rows = 0, sub_rows = 0, growth = 0;
  bool ok = true;
  for (const auto& r : rows) {
    if (r.q > 2.0) {
      ++critical_rows;
      ok = ok && r.status != "failed" && std::isfinite(r.ratio) && r.ratio > 0;
      lo = std::min(lo, r.ratio);
      hi = std::max(hi, r.ratio);
    } else {
      ++sub_rows;
      growth += r.status == "growth";
    }
  }
  ok = ok && critical_rows == 6 && sub_rows == 6 && hi <= 2.0 * lo && secs < 600.0;
  o.passed = ok;
  o.detail = "q=2.4 ratio in [" + fmt("%.4g", lo) + ", " + fmt("%.4g", hi) + "], q=1.6 growth flags " +
             std::to_string(growth) + "/" + std::to_string(sub_rows) + ", runtime " + fmt("%.1f", secs) + "s";
  return o;
}

Outcome blowup_round_trip()
{
  Outcome o;
  o.name = "blow-up round trip";
  std::ostringstream d;
  bool ok = true;

  // Grid-aligned parameters: target nodes land on source nodes.
  double round_trip = 0.0;
  {
    auto g = grid_of(1, 2.0, 1.0 / 16, 1.0, 1.0 / 64);
    const auto u = ScalarField::sample(g, [](const Point& x, double t) { return std::sin(3 * x[0]) * std::exp(-t); });
    BlowupParams p;
    p.variant = BlowupVariant::alpha;
    p.M = 0.5;
    p.r = 0.25;
    const auto b = blowup_transform(u, ScalarField(g), ScalarField::constant(g, 1.0), p, grid_of(1, 1.0, 0.25, 1.0, 0.25));
    auto back_grid = grid_of(1, 0.25, 1.0 / 16, 1.0 / 16, 1.0 / 64);
    const auto back = inverse_blowup(b.w, p, back_grid);
    for (int k = 0; k < back_grid->level_count(); ++k)
      for (int node : back_grid->active_nodes())
        round_trip = std::max(round_trip, std::abs(back(node, k) - interpolate(u, back_grid->position(node),
                                                                                 back_grid->time(k))));
  }
  {
    auto g = grid_of(2, 1.0, 1.0 / 8, 1.0, 1.0 / 64);
    const auto u = ScalarField::sample(g, [](const Point& x, double t) { return x[0] * x[1] + std::cos(x[0] - t); });
    BlowupParams p;
    p.variant = BlowupVariant::alpha0;
    p.M = 2.0;
    p.r = 0.5;
    const auto b = blowup_transform(u, ScalarField(g), ScalarField::constant(g, 1.0), p, grid_of(2, 1.0, 0.25, 2.0, 0.5));
    auto back_grid = grid_of(2, 0.5, 1.0 / 8, 1.0 / 16, 1.0 / 64);
    const auto back = inverse_blowup(b.w, p, back_grid);
    for (int k = 0; k < back_grid->level_count(); ++k)
      for (int node : back_grid->active_nodes())
        round_trip = std::max(round_trip, std::abs(back(node, k) - interpolate(u, back_grid->position(node),
                                                                                 back_grid->time(k))));
  }
  ok = ok && round_trip <= 1e-10;
  d << "round trip " << fmt("%.2e", round_trip) << "; ";

  // Sandwich and normalization on selected worst pairs.
  std::mt19937_64 rng(57721);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  int selections = 0, sandwich_fail = 0, norm_fail = 0, form_fail = 0;
  double norm_err = 0.0;
  const double gamma = 3.0, alpha0 = critical_holder(gamma);
  for (int trial = 0; trial < 12; ++trial) {
    auto g = grid_of(1, 1.0, 1.0 / 16, 1.0, 1.0 / 32);
    const double a = U(rng), k1 = 1 + 3 * U(rng);
    const int family = trial % 3;
    const auto u = ScalarField::sample(g, [&](const Point& x, double t) {
      if (family == 0)
        return std::sin(k1 * x[0] + a);
      if (family == 1)
        return std::cos(k1 * t + a);
      return std::sin(k1 * x[0] + a) * (1 + t) + t * t;
    });
    const Cylinder q = Cylinder::of(*g);
    const double z = 0.5 + U(rng);
    for (SelectionKind kind : {SelectionKind::nonlinear, SelectionKind::weighted_classical}) {
      const double alpha = kind == SelectionKind::nonlinear ? alpha0 : alpha0 + 0.3 * U(rng);
      const auto p = worst_pair_selection(u, kind, alpha, z, gamma, q);
      ++selections;
      if (!(p.L <= p.quotient && p.quotient <= 2 * p.L))
        ++sandwich_fail;
      if (std::abs(p.scaled_form - p.quotient) > 1e-12 * p.quotient)
        ++form_fail;
      const double expected = p.selection_case == 'b' ? z : 1.0;
      const double err = std::abs(normalization_check(u, p) - expected);
      norm_err = std::max(norm_err, err);
      if (err > 1e-12)
        ++norm_fail;
    }
  }
  ok = ok && sandwich_fail == 0 && norm_fail == 0 && form_fail == 0;
  d << selections << " selections, sandwich failures " << sandwich_fail << ", scaled-form failures " << form_fail
    << ", max normalization error " << fmt("%.2e", norm_err);
  o.passed = ok;
  o.detail = d.str();
  return o;
}

const std::vector<Criterion>& criteria()
{
  static const std::vector<Criterion> list = {
    {"1", manufactured_convergence}, {"2", fp_conservation},   {"3", heat_kernel_regression},
    {"4", duality_convergence},      {"5", seminorm_oracle},   {"6", ldiff_cap},
    {"7", legendre_gap},             {"8", liouville_decay},   {"9", exponent_identities},
    {"10", maxreg_smoke},            {"11", blowup_round_trip},
  };
  return list;
}

Outcome run(const Criterion& c)
{
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = c.run();
  } catch (const std::exception& e) {
    o.name = "criterion " + c.id;
    o.passed = false;
    o.detail = std::string("exception: ") + e.what();
  }
  o.seconds = since(t0);
  return o;
}

} // namespace vhj::acceptance
