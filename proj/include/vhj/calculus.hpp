#pragma once

#include "vhj/grid.hpp"

#include <Eigen/Core>

namespace vhj {

using LevelRef = Eigen::Ref<const Eigen::VectorXd>;

// Per-level finite differences. Inputs are one column of a field (all lattice
// nodes); outputs are defined on active nodes and zero elsewhere.

/// Second-order central differences in the interior, one-sided first-order
/// differences where a neighbour is missing. Row a holds the a-th component.
Eigen::Matrix2Xd gradient_central(const Grid& grid, const LevelRef& u);

/// Monotone (Godunov) surrogate of |Du| for a Hamiltonian convex and increasing
/// in |p|: per axis max(max(D^- u, 0), -min(D^+ u, 0)), combined in l2.
Eigen::VectorXd gradient_godunov(const Grid& grid, const LevelRef& u);

/// (2N+1)-point Laplacian at interior nodes; zero on boundary nodes.
Eigen::VectorXd laplacian(const Grid& grid, const LevelRef& u);

/// Frobenius norm of the central second-difference Hessian (interior nodes).
Eigen::VectorXd hessian_frobenius(const Grid& grid, const LevelRef& u);

Eigen::Matrix2Xd gradient_central(const ScalarField& u, int level);
Eigen::VectorXd gradient_godunov(const ScalarField& u, int level);
Eigen::VectorXd laplacian(const ScalarField& u, int level);

/// Central gradient at every level.
VectorField gradient_central(const ScalarField& u);

/// Largest |Du| estimate over all active nodes of one level (one-sided
/// differences), used as a Lipschitz bound.
double lipschitz_estimate(const Grid& grid, const LevelRef& u);

} // namespace vhj
