#pragma once

#include "vhj/grid.hpp"

#include <cstdint>

namespace vhj {

// Discrete Holder-type seminorms. Every supremum runs over pairs of active
// grid nodes inside the (closed) cylinder; boundary nodes are included and an
// argmax touching the backward parabolic boundary is flagged.

enum class PairRegime
{
  exact,     ///< every eligible pair enumerated
  sampled,   ///< deterministic stratified sampling above the pair budget
  degenerate ///< no eligible pair; value is 0
};

struct SpaceTimeNode
{
  int node = -1;
  int level = -1;
};

struct SeminormValue
{
  double value = 0.0;
  SpaceTimeNode first;
  SpaceTimeNode second;
  PairRegime regime = PairRegime::degenerate;
  bool argmax_on_boundary = false;
  std::int64_t pairs = 0; ///< pairs evaluated
};

struct SeminormOptions
{
  std::int64_t pair_budget = 100'000'000;
  std::int64_t samples = 10'000'000;
  std::uint64_t seed = 0x5eed5eedULL;
  bool force_exact = false;
};

/// [u]_{alpha;Q}: sup |u(P) - u(P')| / (|x - x'| + |t - t'|^{1/2})^alpha.
SeminormValue holder_seminorm(const ScalarField& u, double alpha, const Cylinder& q,
                              const SeminormOptions& opts = {});

/// [u]^c_{alpha;Q}: the same quotient weighted by min(d(P), d(P'))^c with the
/// parabolic distance d to the backward boundary of Q.
SeminormValue weighted_holder(const ScalarField& u, double alpha, double c, const Cylinder& q,
                              const SeminormOptions& opts = {});

/// Same-time pairs weighted by min d_alpha: sup min d_alpha |u(x,t)-u(x',t)| / |x-x'|^alpha.
SeminormValue nonlinear_space(const ScalarField& u, double alpha, double gamma, const Cylinder& q,
                              const SeminormOptions& opts = {});

/// Same-position pairs weighted by (min d_alpha)^{gamma/2}, quotient by |t-t'|^{alpha/2}.
SeminormValue nonlinear_time(const ScalarField& u, double alpha, double gamma, const Cylinder& q,
                             const SeminormOptions& opts = {});

/// max(space, (time / z)^{2/gamma}).
double combine_nonlinear(double space, double time, double z, double gamma);

/// Combined nonlinear seminorm; the argmax is the one of the dominating part.
SeminormValue nonlinear_combined(const ScalarField& u, double alpha, double z, double gamma, const Cylinder& q,
                                 const SeminormOptions& opts = {});

/// Unweighted same-time quotient sup |u(x,t)-u(x',t)| / |x-x'|^alpha.
SeminormValue space_quotient(const ScalarField& u, double alpha, const Cylinder& q, const SeminormOptions& opts = {});

/// Unweighted same-position quotient sup |u(x,t)-u(x,t')| / |t-t'|^{alpha/2}.
SeminormValue time_quotient(const ScalarField& u, double alpha, const Cylinder& q, const SeminormOptions& opts = {});

struct SeminormSet
{
  SeminormValue classical;
  SeminormValue weighted;
  SeminormValue nl_space;
  SeminormValue nl_time;
  double nl_combined = 0.0;
};

SeminormSet compute_seminorms(const ScalarField& u, double alpha, double c, double z, double gamma, const Cylinder& q,
                              const SeminormOptions& opts = {});

struct W21qNorms
{
  double time_derivative = 0.0; ///< ||d_t u||_q
  double hessian = 0.0;         ///< ||D^2 u||_q (Frobenius)
  double gradient_power = 0.0;  ///< || |Du|^gamma ||_q
  double sum() const { return time_derivative + hessian + gradient_power; }
};

/// Parabolic Sobolev quantities on a sub-cylinder that keeps two nodes (and two
/// levels) away from every face of the grid cylinder.
W21qNorms w21q_norms(const ScalarField& u, double q, double gamma, const Cylinder& sub);

} // namespace vhj
