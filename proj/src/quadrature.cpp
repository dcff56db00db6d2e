#include "vhj/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace vhj {

namespace {

double overlap(double a0, double a1, double b0, double b1)
{
  return std::max(0.0, std::min(a1, b1) - std::max(a0, b0));
}

} // namespace

Eigen::VectorXd spatial_weights(const Grid& grid, const Cylinder& q)
{
  Eigen::VectorXd w = Eigen::VectorXd::Zero(grid.node_count());
  const double h = grid.dx();
  const double r = grid.half_width();
  const bool clip_domain = !grid.spec().ball;
  for (int node : grid.active_nodes()) {
    const Point x = grid.position(node);
    if (q.shape == Cylinder::Shape::ball && !q.contains_space(x, grid.dim()))
      continue;
    double weight = 1.0;
    for (int axis = 0; axis < grid.dim(); ++axis) {
      double a0 = x[axis] - h / 2;
      double a1 = x[axis] + h / 2;
      if (clip_domain) {
        a0 = std::max(a0, -r);
        a1 = std::min(a1, r);
      }
      if (q.shape == Cylinder::Shape::box)
        weight *= overlap(a0, a1, q.lo[axis], q.hi[axis]);
      else
        weight *= std::max(0.0, a1 - a0);
    }
    w[node] = weight;
  }
  return w;
}

Eigen::VectorXd time_weights(const Grid& grid, double t0, double t1)
{
  Eigen::VectorXd w(grid.level_count());
  const double dt = grid.dt();
  const double lo = std::max(0.0, t0);
  const double hi = std::min(grid.horizon(), t1);
  for (int k = 0; k < grid.level_count(); ++k)
    w[k] = overlap(grid.time(k) - dt / 2, grid.time(k) + dt / 2, lo, hi);
  return w;
}

double integrate(const Grid& grid, const Eigen::MatrixXd& values, const Cylinder& q)
{
  const Eigen::VectorXd sw = spatial_weights(grid, q);
  const Eigen::VectorXd tw = time_weights(grid, q.t0, q.t1);
  return sw.dot(values * tw);
}

double integrate(const ScalarField& u, const Cylinder& q)
{
  return integrate(u.grid(), u.values(), q);
}

double integrate_level(const Grid& grid, const Eigen::Ref<const Eigen::VectorXd>& values, const Cylinder& q)
{
  return spatial_weights(grid, q).dot(values);
}

double lq_norm(const Grid& grid, const Eigen::MatrixXd& values, double q, const Cylinder& sub)
{
  if (!(q >= 1.0))
    throw std::invalid_argument("lq_norm requires q >= 1");
  const Eigen::MatrixXd powered = values.array().abs().pow(q).matrix();
  return std::pow(integrate(grid, powered, sub), 1.0 / q);
}

double lq_norm(const ScalarField& u, double q, const Cylinder& sub)
{
  return lq_norm(u.grid(), u.values(), q, sub);
}

double quadrature_volume(const Grid& grid, const Cylinder& q)
{
  return spatial_weights(grid, q).sum() * time_weights(grid, q.t0, q.t1).sum();
}

double interpolate(const ScalarField& u, const Point& x, double t)
{
  const Grid& grid = u.grid();
  auto fail = [&]() {
    std::ostringstream os;
    os.precision(17);
    os << "interpolation point (" << x[0];
    if (grid.dim() == 2)
      os << ", " << x[1];
    os << ", t=" << t << ") is outside the sampled grid";
    throw std::out_of_range(os.str());
  };

  auto locate = [&](double c, double origin, double step, int count, int& index, double& frac) {
    double s = (c - origin) / step;
    const double r = std::round(s);
    if (std::abs(s - r) < 1e-9)
      s = r;
    if (s < 0.0 || s > count - 1)
      fail();
    index = std::min(static_cast<int>(std::floor(s)), count - 2);
    frac = s - index;
  };

  int ti = 0;
  double tf = 0.0;
  locate(t, 0.0, grid.dt(), grid.level_count(), ti, tf);

  const int n = grid.points_per_axis();
  int ix = 0, iy = 0;
  double fx = 0.0, fy = 0.0;
  locate(x[0], -grid.half_width(), grid.dx(), n, ix, fx);
  if (grid.dim() == 2)
    locate(x[1], -grid.half_width(), grid.dx(), n, iy, fy);

  double acc = 0.0;
  const int ny = grid.dim() == 2 ? 2 : 1;
  for (int a = 0; a < 2; ++a) {
    const double wa = a ? fx : 1.0 - fx;
    if (wa == 0.0)
      continue;
    for (int b = 0; b < ny; ++b) {
      const double wb = grid.dim() == 2 ? (b ? fy : 1.0 - fy) : 1.0;
      if (wb == 0.0)
        continue;
      const int node = grid.node_at(ix + a, iy + b);
      if (!grid.active(node))
        fail();
      for (int c = 0; c < 2; ++c) {
        const double wc = c ? tf : 1.0 - tf;
        if (wc == 0.0)
          continue;
        acc += wa * wb * wc * u(node, ti + c);
      }
    }
  }
  return acc;
}

ScalarField resample(const ScalarField& u, GridPtr target)
{
  return ScalarField::sample(std::move(target), [&](const Point& x, double t) { return interpolate(u, x, t); });
}

} // namespace vhj
