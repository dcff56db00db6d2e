#pragma once

#include "vhj/grid.hpp"

namespace vhj {

// Node-centred midpoint quadrature: every node owns the cell of side dx (and
// time slab dt) around it, clipped to the integration cylinder and, on box
// grids, to the domain. Constants therefore integrate exactly on boxes.

/// Spatial weight of every lattice node for integration over q's spatial set.
Eigen::VectorXd spatial_weights(const Grid& grid, const Cylinder& q);

/// Time weight of every level for integration over [t0, t1].
Eigen::VectorXd time_weights(const Grid& grid, double t0, double t1);

/// Space-time integral of `values` (node x level) over q.
double integrate(const Grid& grid, const Eigen::MatrixXd& values, const Cylinder& q);
double integrate(const ScalarField& u, const Cylinder& q);

/// Spatial integral of one level over q's spatial set.
double integrate_level(const Grid& grid, const Eigen::Ref<const Eigen::VectorXd>& values, const Cylinder& q);

/// (iint |u|^q)^{1/q} over the cylinder. Rejects q < 1.
double lq_norm(const Grid& grid, const Eigen::MatrixXd& values, double q, const Cylinder& sub);
double lq_norm(const ScalarField& u, double q, const Cylinder& sub);

/// Space-time volume the quadrature assigns to the cylinder.
double quadrature_volume(const Grid& grid, const Cylinder& q);

/// Multilinear space-time interpolation. Points within 1e-9 dx of a lattice
/// line (1e-9 dt of a level) are snapped so that node values are reproduced
/// exactly. Throws std::out_of_range naming the point when the stencil leaves
/// the grid or touches an inactive node.
double interpolate(const ScalarField& u, const Point& x, double t);

/// Samples `u` at every active node/level of `target` by interpolation.
ScalarField resample(const ScalarField& u, GridPtr target);

} // namespace vhj
