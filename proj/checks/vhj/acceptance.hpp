#pragma once

#include <functional>
#include <string>
#include <vector>

namespace vhj::acceptance {

struct Outcome
{
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

Outcome manufactured_convergence();
Outcome fp_conservation();
Outcome heat_kernel_regression();
Outcome duality_convergence();
Outcome seminorm_oracle();
Outcome ldiff_cap();
Outcome legendre_gap();
Outcome liouville_decay();
Outcome exponent_identities();
Outcome maxreg_smoke();
Outcome blowup_round_trip();

struct Criterion
{
  std::string id;
  std::function<Outcome()> run;
};

const std::vector<Criterion>& criteria();

/// Runs one criterion, timing it and turning exceptions into failures.
Outcome run(const Criterion& c);

/// Least-squares slope of log(err) against log(h), negated sign kept: errors
/// shrinking like h^p give p.
double fitted_order(const std::vector<double>& h, const std::vector<double>& err);

} // namespace vhj::acceptance
