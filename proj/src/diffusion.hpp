#pragma once

#include "vhj/grid.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <map>
#include <vector>

namespace vhj::detail {

class ImplicitDiffusion
{
public:
  ImplicitDiffusion(const Grid& grid, double sigma)
    : grid_(grid)
    , sigma_(sigma)
    , index_(grid.node_count(), -1)
  {
    int next = 0;
    for (int node : grid.interior_nodes())
      index_[node] = next++;
  }

  /// Solves (I - delta sigma Lap) x = rhs on interior nodes with Dirichlet
  /// values taken from `v` on boundary nodes. Returns the relative residual.
  double solve(double delta, const Eigen::VectorXd& rhs_nodes, Eigen::VectorXd& v)
  {
    const auto& inner = grid_.interior_nodes();
    const int n = static_cast<int>(inner.size());
    if (n == 0)
      return 0.0;
    const double c = delta * sigma_ / (grid_.dx() * grid_.dx());
    Eigen::VectorXd rhs(n);
    for (int a = 0; a < n; ++a) {
      const int node = inner[a];
      double acc = rhs_nodes[node];
      for (int axis = 0; axis < grid_.dim(); ++axis)
        for (int dir : {-1, 1}) {
          const int nb = grid_.neighbor(node, axis, dir);
          if (index_[nb] < 0)
            acc += c * v[nb];
        }
      rhs[a] = acc;
    }
    auto& entry = factor(delta, c);
    const Eigen::VectorXd x = entry.solver.solve(rhs);
    for (int a = 0; a < n; ++a)
      v[inner[a]] = x[a];
    const double scale = rhs.norm();
    return scale > 0.0 ? (entry.matrix * x - rhs).norm() / scale : 0.0;
  }

private:
  struct Entry
  {
    Eigen::SparseMatrix<double> matrix;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
  };

  Entry& factor(double delta, double c)
  {
    auto it = cache_.find(delta);
    if (it != cache_.end())
      return it->second;
    const auto& inner = grid_.interior_nodes();
    std::vector<Eigen::Triplet<double>> trip;
    for (size_t a = 0; a < inner.size(); ++a) {
      const int node = inner[a];
      trip.emplace_back(static_cast<int>(a), static_cast<int>(a), 1.0 + 2.0 * grid_.dim() * c);
      for (int axis = 0; axis < grid_.dim(); ++axis)
        for (int dir : {-1, 1}) {
          const int j = index_[grid_.neighbor(node, axis, dir)];
          if (j >= 0)
            trip.emplace_back(static_cast<int>(a), j, -c);
        }
    }
    Entry& e = cache_[delta];
    e.matrix.resize(static_cast<int>(inner.size()), static_cast<int>(inner.size()));
    e.matrix.setFromTriplets(trip.begin(), trip.end());
    e.solver.compute(e.matrix);
    if (e.solver.info() != Eigen::Success)
      throw NumericalError("diffusion matrix factorization failed");
    return e;
  }

  const Grid& grid_;
  double sigma_;
  std::vector<int> index_;
  std::map<double, Entry> cache_;
};

} // namespace vhj::detail
