#pragma once

#include "vhj/grid.hpp"
#include "vhj/seminorm.hpp"

namespace vhj::oracle {

/// Absorbing-box heat kernel on [-R, R]^N started from a unit mass at x0,
/// by the method of images (free Gaussians of variance 2 sigma t per axis).
double box_heat_kernel(const Point& x, const Point& x0, double t, double sigma, double R, int dim, int images = 12);

/// E|Y|^alpha for Y ~ N(0, 2 sigma tau I_N) by radial quadrature (composite Simpson).
double gaussian_moment_quadrature(int dim, double sigma, double tau, double alpha);

/// Naive pair enumeration over every ordered pair i < j of the cylinder's
/// space-time points, keeping the first strict maximum.
struct NaiveSeminorm
{
  double value = 0.0;
  SpaceTimeNode first;
  SpaceTimeNode second;
};

NaiveSeminorm classical(const ScalarField& u, double alpha, double c, const Cylinder& q);
NaiveSeminorm nl_space(const ScalarField& u, double alpha, double gamma, const Cylinder& q);
NaiveSeminorm nl_time(const ScalarField& u, double alpha, double gamma, const Cylinder& q);

} // namespace vhj::oracle
