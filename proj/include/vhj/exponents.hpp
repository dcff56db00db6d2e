#pragma once

#include <cmath>
#include <stdexcept>

namespace vhj {

/// gamma' = gamma / (gamma - 1).
inline double conjugate_exponent(double gamma)
{
  return gamma / (gamma - 1.0);
}

/// q0 = (N + 2) / gamma', the critical integrability of the right-hand side.
inline double critical_integrability(double gamma, int dim)
{
  return (dim + 2) / conjugate_exponent(gamma);
}

/// alpha0 = (gamma - 2) / (gamma - 1).
inline double critical_holder(double gamma)
{
  return (gamma - 2.0) / (gamma - 1.0);
}

/// Holder exponent paired with q: alpha = 2 - (N + 2) / q.
inline double holder_from_integrability(double q, int dim)
{
  return 2.0 - (dim + 2) / q;
}

/// Lagrangian coefficient: h |p|^gamma = sup_q { p.q - ell |q|^gamma' } with
/// ell = h (gamma - 1) / (h gamma)^gamma'.
inline double lagrangian_coefficient(double h, double gamma)
{
  return h * (gamma - 1.0) / std::pow(h * gamma, conjugate_exponent(gamma));
}

/// Exponent of sigma in the rescaled norm identity, gamma' (N+1)/(N+2).
inline double rescaled_norm_exponent(double gamma, int dim)
{
  return conjugate_exponent(gamma) * (dim + 1.0) / (dim + 2.0);
}

inline void require_superquadratic(double gamma)
{
  if (!(gamma > 2.0))
    throw std::invalid_argument("gamma must exceed 2");
}

} // namespace vhj
