#include "vhj/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace vhj::oracle {

namespace {

double gaussian_1d(double d, double t, double sigma)
{
  return std::exp(-d * d / (4.0 * sigma * t)) / std::sqrt(4.0 * std::numbers::pi * sigma * t);
}

// Interval [0, L] with absorbing ends, source at a.
double interval_kernel(double y, double a, double t, double sigma, double L, int images)
{
  double s = 0.0;
  for (int n = -images; n <= images; ++n) {
    s += gaussian_1d(y - a + 2.0 * n * L, t, sigma);
    s -= gaussian_1d(y + a + 2.0 * n * L, t, sigma);
  }
  return s;
}

struct Pt
{
  int node, level;
  Point x;
  double t, u, w;
};

std::vector<Pt> points(const ScalarField& u, const Cylinder& q, DistanceKind kind, double alpha, double gamma)
{
  const Grid& g = u.grid();
  const CylinderNodes m = nodes_in(g, q);
  std::vector<Pt> out;
  for (int k : m.levels)
    for (int node : m.nodes) {
      const Point x = g.position(node);
      const double tc = std::min(std::max(g.time(k), q.t0), q.t1);
      out.push_back({node, k, x, g.time(k), u(node, k), parabolic_distance(x, tc, q, g.dim(), kind, alpha, gamma)});
    }
  return out;
}

template <typename Pair, typename Q>
NaiveSeminorm scan(const std::vector<Pt>& p, Pair eligible, Q quotient)
{
  NaiveSeminorm best;
  best.value = -1.0;
  bool any = false;
  for (size_t i = 0; i < p.size(); ++i)
    for (size_t j = i + 1; j < p.size(); ++j) {
      if (!eligible(p[i], p[j]))
        continue;
      const double v = quotient(p[i], p[j]);
      if (!any || v > best.value) {
        any = true;
        best.value = v;
        best.first = {p[i].node, p[i].level};
        best.second = {p[j].node, p[j].level};
      }
    }
  if (!any)
    best.value = 0.0;
  return best;
}

double gap(const Pt& a, const Pt& b)
{
  const double d0 = a.x[0] - b.x[0];
  const double d1 = a.x[1] - b.x[1];
  return std::sqrt(d0 * d0 + d1 * d1);
}

} // namespace

double box_heat_kernel(const Point& x, const Point& x0, double t, double sigma, double R, int dim, int images)
{
  double v = 1.0;
  for (int a = 0; a < dim; ++a)
    v *= interval_kernel(x[a] + R, x0[a] + R, t, sigma, 2.0 * R, images);
  return v;
}

double gaussian_moment_quadrature(int dim, double sigma, double tau, double alpha)
{
  const double surface = dim == 1 ? 2.0 : dim == 2 ? 2.0 * std::numbers::pi : 4.0 * std::numbers::pi;
  const double var4 = 4.0 * sigma * tau;
  const double norm = std::pow(std::numbers::pi * var4, -0.5 * dim);
  // r = s^2 smooths the r^alpha behaviour at the origin.
  const double smax = std::sqrt(12.0 * std::sqrt(var4));
  const int n = 40000;
  const double hs = smax / n;
  auto integrand = [&](double s) {
    const double r = s * s;
    return 2.0 * s * std::pow(r, alpha + dim - 1) * std::exp(-r * r / var4);
  };
  double acc = integrand(0.0) + integrand(smax);
  for (int i = 1; i < n; ++i)
    acc += (i % 2 ? 4.0 : 2.0) * integrand(i * hs);
  return surface * norm * acc * hs / 3.0;
}

NaiveSeminorm classical(const ScalarField& u, double alpha, double c, const Cylinder& q)
{
  const auto p = points(u, q, DistanceKind::parabolic, alpha, 2.0);
  return scan(
    p, [](const Pt&, const Pt&) { return true; },
    [&](const Pt& a, const Pt& b) {
      const double dist = gap(a, b) + std::sqrt(std::abs(a.t - b.t));
      return std::pow(std::min(a.w, b.w), c) * (std::abs(a.u - b.u) / std::pow(dist, alpha));
    });
}

NaiveSeminorm nl_space(const ScalarField& u, double alpha, double gamma, const Cylinder& q)
{
  const auto p = points(u, q, DistanceKind::holder, alpha, gamma);
  return scan(
    p, [](const Pt& a, const Pt& b) { return a.level == b.level; },
    [&](const Pt& a, const Pt& b) { return std::min(a.w, b.w) * (std::abs(a.u - b.u) / std::pow(gap(a, b), alpha)); });
}

NaiveSeminorm nl_time(const ScalarField& u, double alpha, double gamma, const Cylinder& q)
{
  const auto p = points(u, q, DistanceKind::holder, alpha, gamma);
  return scan(
    p, [](const Pt& a, const Pt& b) { return a.node == b.node; },
    [&](const Pt& a, const Pt& b) {
      return std::pow(std::min(a.w, b.w), gamma / 2.0) * (std::abs(a.u - b.u) / std::pow(std::abs(a.t - b.t), alpha / 2.0));
    });
}

} // namespace vhj::oracle
