#include "vhj/calculus.hpp"

#include <algorithm>
#include <cmath>

namespace vhj {

Eigen::Matrix2Xd gradient_central(const Grid& grid, const LevelRef& u)
{
  Eigen::Matrix2Xd g = Eigen::Matrix2Xd::Zero(2, grid.node_count());
  const double h = grid.dx();
  for (int node : grid.active_nodes()) {
    for (int axis = 0; axis < grid.dim(); ++axis) {
      const int lo = grid.neighbor(node, axis, -1);
      const int hi = grid.neighbor(node, axis, +1);
      if (lo >= 0 && hi >= 0)
        g(axis, node) = (u[hi] - u[lo]) / (2 * h);
      else if (hi >= 0)
        g(axis, node) = (u[hi] - u[node]) / h;
      else if (lo >= 0)
        g(axis, node) = (u[node] - u[lo]) / h;
    }
  }
  return g;
}

Eigen::VectorXd gradient_godunov(const Grid& grid, const LevelRef& u)
{
  Eigen::VectorXd mag = Eigen::VectorXd::Zero(grid.node_count());
  const double h = grid.dx();
  for (int node : grid.active_nodes()) {
    double sum = 0.0;
    for (int axis = 0; axis < grid.dim(); ++axis) {
      const int lo = grid.neighbor(node, axis, -1);
      const int hi = grid.neighbor(node, axis, +1);
      const double backward = lo >= 0 ? std::max((u[node] - u[lo]) / h, 0.0) : 0.0;
      const double forward = hi >= 0 ? std::max(-(u[hi] - u[node]) / h, 0.0) : 0.0;
      const double p = std::max(backward, forward);
      sum += p * p;
    }
    mag[node] = std::sqrt(sum);
  }
  return mag;
}

Eigen::VectorXd laplacian(const Grid& grid, const LevelRef& u)
{
  Eigen::VectorXd lap = Eigen::VectorXd::Zero(grid.node_count());
  const double inv = 1.0 / (grid.dx() * grid.dx());
  for (int node : grid.interior_nodes()) {
    double acc = 0.0;
    for (int axis = 0; axis < grid.dim(); ++axis)
      acc += u[grid.neighbor(node, axis, -1)] - 2 * u[node] + u[grid.neighbor(node, axis, +1)];
    lap[node] = acc * inv;
  }
  return lap;
}

Eigen::VectorXd hessian_frobenius(const Grid& grid, const LevelRef& u)
{
  Eigen::VectorXd out = Eigen::VectorXd::Zero(grid.node_count());
  const double h = grid.dx();
  for (int node : grid.interior_nodes()) {
    double sum = 0.0;
    for (int axis = 0; axis < grid.dim(); ++axis) {
      const double d2 = (u[grid.neighbor(node, axis, -1)] - 2 * u[node] + u[grid.neighbor(node, axis, +1)]) / (h * h);
      sum += d2 * d2;
    }
    if (grid.dim() == 2) {
      const int e = grid.neighbor(node, 0, +1);
      const int w = grid.neighbor(node, 0, -1);
      const int ne = grid.neighbor(e, 1, +1);
      const int se = grid.neighbor(e, 1, -1);
      const int nw = grid.neighbor(w, 1, +1);
      const int sw = grid.neighbor(w, 1, -1);
      if (ne >= 0 && se >= 0 && nw >= 0 && sw >= 0) {
        const double mixed = (u[ne] - u[se] - u[nw] + u[sw]) / (4 * h * h);
        sum += 2 * mixed * mixed;
      }
    }
    out[node] = std::sqrt(sum);
  }
  return out;
}

Eigen::Matrix2Xd gradient_central(const ScalarField& u, int level)
{
  return gradient_central(u.grid(), u.level(level));
}

Eigen::VectorXd gradient_godunov(const ScalarField& u, int level)
{
  return gradient_godunov(u.grid(), u.level(level));
}

Eigen::VectorXd laplacian(const ScalarField& u, int level)
{
  return laplacian(u.grid(), u.level(level));
}

VectorField gradient_central(const ScalarField& u)
{
  VectorField out(u.grid_ptr());
  for (int k = 0; k < u.grid().level_count(); ++k) {
    const Eigen::Matrix2Xd g = gradient_central(u, k);
    out.component(0).col(k) = g.row(0).transpose();
    out.component(1).col(k) = g.row(1).transpose();
  }
  return out;
}

double lipschitz_estimate(const Grid& grid, const LevelRef& u)
{
  double best = 0.0;
  const double h = grid.dx();
  for (int node : grid.active_nodes())
    for (int axis = 0; axis < grid.dim(); ++axis) {
      const int hi = grid.neighbor(node, axis, +1);
      if (hi >= 0)
        best = std::max(best, std::abs(u[hi] - u[node]) / h);
    }
  return best * std::sqrt(static_cast<double>(grid.dim()));
}

} // namespace vhj
