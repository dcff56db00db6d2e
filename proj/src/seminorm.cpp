#include "vhj/seminorm.hpp"

#include "vhj/calculus.hpp"
#include "vhj/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

namespace vhj {

namespace {

enum class PairMode
{
  all,
  same_time,
  same_position
};

struct SamplePoint
{
  int node;
  int level;
  double x0;
  double x1;
  double t;
  double u;
  double weight; // distance to the backward boundary (kind depends on the seminorm)
  bool on_boundary;
};

struct Best
{
  double value = -1.0;
  int i = -1;
  int j = -1;

  void offer(double v, int a, int b)
  {
    if (v > value || (v == value && (a < i || (a == i && b < j)))) {
      value = v;
      i = a;
      j = b;
    }
  }
  void merge(const Best& o)
  {
    if (o.i >= 0)
      offer(o.value, o.i, o.j);
  }
};

std::vector<SamplePoint> collect(const ScalarField& u, const Cylinder& q, DistanceKind kind, double alpha,
                                 double gamma)
{
  const Grid& grid = u.grid();
  const CylinderNodes members = nodes_in(grid, q);
  std::vector<SamplePoint> pts;
  pts.reserve(members.nodes.size() * members.levels.size());
  for (int k : members.levels) {
    for (int node : members.nodes) {
      const Point x = grid.position(node);
      // Levels may sit a hair outside [t0, t1]; clamp so the distance is defined.
      const double t = std::clamp(grid.time(k), q.t0, q.t1);
      const double ds = q.boundary_distance(x, grid.dim());
      SamplePoint p{node, k, x[0], x[1], grid.time(k), u(node, k), 0.0, false};
      p.weight = parabolic_distance(x, t, q, grid.dim(), kind, alpha, gamma);
      p.on_boundary = ds <= 1e-12 || q.t1 - t <= 1e-12;
      pts.push_back(p);
    }
  }
  return pts;
}

// Groups of point indices whose members may be paired with each other.
std::vector<std::vector<int>> groups_of(const std::vector<SamplePoint>& pts, PairMode mode)
{
  std::vector<std::vector<int>> groups;
  if (mode == PairMode::all) {
    groups.emplace_back(pts.size());
    for (size_t i = 0; i < pts.size(); ++i)
      groups[0][i] = static_cast<int>(i);
    return groups;
  }
  std::vector<std::pair<int, int>> keyed;
  keyed.reserve(pts.size());
  for (size_t i = 0; i < pts.size(); ++i)
    keyed.emplace_back(mode == PairMode::same_time ? pts[i].level : pts[i].node, static_cast<int>(i));
  std::sort(keyed.begin(), keyed.end());
  for (size_t a = 0; a < keyed.size(); ++a) {
    if (a == 0 || keyed[a].first != keyed[a - 1].first)
      groups.emplace_back();
    groups.back().push_back(keyed[a].second);
  }
  return groups;
}

template <typename Quotient>
SeminormValue supremum(const std::vector<SamplePoint>& pts, PairMode mode, const SeminormOptions& opts,
                       Quotient&& quotient)
{
  SeminormValue out;
  const auto groups = groups_of(pts, mode);
  std::int64_t total = 0;
  for (const auto& g : groups)
    total += static_cast<std::int64_t>(g.size()) * (static_cast<std::int64_t>(g.size()) - 1) / 2;
  if (total == 0)
    return out;

  Best best;
  if (total <= opts.pair_budget || opts.force_exact) {
    out.regime = PairRegime::exact;
    out.pairs = total;
    for (const auto& g : groups) {
      const int n = static_cast<int>(g.size());
      auto scan = [&](int begin, int stride, Best& local) {
        for (int a = begin; a < n; a += stride)
          for (int b = a + 1; b < n; ++b)
            local.offer(quotient(pts[g[a]], pts[g[b]]), g[a], g[b]);
      };
      const unsigned workers =
        std::min<std::int64_t>(std::max(1u, std::thread::hardware_concurrency()), std::max<std::int64_t>(1, n / 64));
      if (workers <= 1) {
        scan(0, 1, best);
        continue;
      }
      std::vector<Best> partial(workers);
      std::vector<std::thread> pool;
      for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back(scan, static_cast<int>(w), static_cast<int>(workers), std::ref(partial[w]));
      for (auto& th : pool)
        th.join();
      for (const auto& p : partial)
        best.merge(p);
    }
  } else {
    // Stratified: cycle the first point through every eligible point, draw the
    // partner uniformly from its group.
    out.regime = PairRegime::sampled;
    std::mt19937_64 rng(opts.seed);
    std::vector<std::pair<int, int>> owners; // (group, position)
    for (size_t gi = 0; gi < groups.size(); ++gi)
      if (groups[gi].size() > 1)
        for (size_t a = 0; a < groups[gi].size(); ++a)
          owners.emplace_back(static_cast<int>(gi), static_cast<int>(a));
    for (std::int64_t s = 0; s < opts.samples; ++s) {
      const auto [gi, a] = owners[static_cast<size_t>(s % static_cast<std::int64_t>(owners.size()))];
      const auto& g = groups[gi];
      std::uniform_int_distribution<int> pick(0, static_cast<int>(g.size()) - 2);
      int b = pick(rng);
      if (b >= a)
        ++b;
      const int i = std::min(g[a], g[b]);
      const int j = std::max(g[a], g[b]);
      best.offer(quotient(pts[i], pts[j]), i, j);
    }
    out.pairs = opts.samples;
  }

  out.value = best.value;
  out.first = {pts[best.i].node, pts[best.i].level};
  out.second = {pts[best.j].node, pts[best.j].level};
  out.argmax_on_boundary = pts[best.i].on_boundary || pts[best.j].on_boundary;
  return out;
}

double space_gap(const SamplePoint& p, const SamplePoint& r)
{
  const double d0 = p.x0 - r.x0;
  const double d1 = p.x1 - r.x1;
  return std::sqrt(d0 * d0 + d1 * d1);
}

void require_alpha(double alpha)
{
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::invalid_argument("alpha must lie in (0, 1]");
}

} // namespace

SeminormValue holder_seminorm(const ScalarField& u, double alpha, const Cylinder& q, const SeminormOptions& opts)
{
  return weighted_holder(u, alpha, 0.0, q, opts);
}

SeminormValue weighted_holder(const ScalarField& u, double alpha, double c, const Cylinder& q,
                              const SeminormOptions& opts)
{
  require_alpha(alpha);
  if (!(c >= 0.0))
    throw std::invalid_argument("weight exponent c must be non-negative");
  const auto pts = collect(u, q, DistanceKind::parabolic, alpha, 2.0);
  return supremum(pts, PairMode::all, opts, [&](const SamplePoint& p, const SamplePoint& r) {
    const double dist = space_gap(p, r) + std::sqrt(std::abs(p.t - r.t));
    return std::pow(std::min(p.weight, r.weight), c) * (std::abs(p.u - r.u) / std::pow(dist, alpha));
  });
}

SeminormValue nonlinear_space(const ScalarField& u, double alpha, double gamma, const Cylinder& q,
                              const SeminormOptions& opts)
{
  require_alpha(alpha);
  const auto pts = collect(u, q, DistanceKind::holder, alpha, gamma);
  return supremum(pts, PairMode::same_time, opts, [&](const SamplePoint& p, const SamplePoint& r) {
    return std::min(p.weight, r.weight) * (std::abs(p.u - r.u) / std::pow(space_gap(p, r), alpha));
  });
}

SeminormValue nonlinear_time(const ScalarField& u, double alpha, double gamma, const Cylinder& q,
                             const SeminormOptions& opts)
{
  require_alpha(alpha);
  const auto pts = collect(u, q, DistanceKind::holder, alpha, gamma);
  return supremum(pts, PairMode::same_position, opts, [&](const SamplePoint& p, const SamplePoint& r) {
    return std::pow(std::min(p.weight, r.weight), gamma / 2.0) *
           (std::abs(p.u - r.u) / std::pow(std::abs(p.t - r.t), alpha / 2.0));
  });
}

double combine_nonlinear(double space, double time, double z, double gamma)
{
  if (!(z > 0.0))
    throw std::invalid_argument("z must be positive");
  return std::max(space, std::pow(time / z, 2.0 / gamma));
}

SeminormValue nonlinear_combined(const ScalarField& u, double alpha, double z, double gamma, const Cylinder& q,
                                 const SeminormOptions& opts)
{
  const SeminormValue sx = nonlinear_space(u, alpha, gamma, q, opts);
  const SeminormValue st = nonlinear_time(u, alpha, gamma, q, opts);
  SeminormValue out = sx.value >= std::pow(st.value / z, 2.0 / gamma) ? sx : st;
  out.value = combine_nonlinear(sx.value, st.value, z, gamma);
  if (sx.regime == PairRegime::sampled || st.regime == PairRegime::sampled)
    out.regime = PairRegime::sampled;
  return out;
}

SeminormValue space_quotient(const ScalarField& u, double alpha, const Cylinder& q, const SeminormOptions& opts)
{
  require_alpha(alpha);
  const auto pts = collect(u, q, DistanceKind::parabolic, alpha, 2.0);
  return supremum(pts, PairMode::same_time, opts, [&](const SamplePoint& p, const SamplePoint& r) {
    return std::abs(p.u - r.u) / std::pow(space_gap(p, r), alpha);
  });
}

SeminormValue time_quotient(const ScalarField& u, double alpha, const Cylinder& q, const SeminormOptions& opts)
{
  require_alpha(alpha);
  const auto pts = collect(u, q, DistanceKind::parabolic, alpha, 2.0);
  return supremum(pts, PairMode::same_position, opts, [&](const SamplePoint& p, const SamplePoint& r) {
    return std::abs(p.u - r.u) / std::pow(std::abs(p.t - r.t), alpha / 2.0);
  });
}

SeminormSet compute_seminorms(const ScalarField& u, double alpha, double c, double z, double gamma, const Cylinder& q,
                              const SeminormOptions& opts)
{
  SeminormSet s;
  s.classical = holder_seminorm(u, alpha, q, opts);
  s.weighted = weighted_holder(u, alpha, c, q, opts);
  s.nl_space = nonlinear_space(u, alpha, gamma, q, opts);
  s.nl_time = nonlinear_time(u, alpha, gamma, q, opts);
  s.nl_combined = combine_nonlinear(s.nl_space.value, s.nl_time.value, z, gamma);
  return s;
}

W21qNorms w21q_norms(const ScalarField& u, double q, double gamma, const Cylinder& sub)
{
  const Grid& grid = u.grid();
  const Eigen::VectorXd sw = spatial_weights(grid, sub);
  const Eigen::VectorXd tw = time_weights(grid, sub.t0, sub.t1);
  if (sw.sum() <= 0.0 || tw.sum() <= 0.0)
    throw std::invalid_argument("sub-cylinder contains no quadrature nodes");

  for (int node : grid.active_nodes()) {
    if (sw[node] <= 0.0)
      continue;
    bool deep = grid.interior(node);
    for (int axis = 0; axis < grid.dim() && deep; ++axis)
      for (int dir : {-1, 1}) {
        const int nb = grid.neighbor(node, axis, dir);
        deep = deep && nb >= 0 && grid.interior(nb);
      }
    if (!deep)
      throw std::invalid_argument("sub-cylinder must stay two nodes away from the spatial boundary");
  }
  const int levels = grid.level_count();
  for (int k = 0; k < levels; ++k)
    if (tw[k] > 0.0 && (k < 2 || k > levels - 3))
      throw std::invalid_argument("sub-cylinder must stay two levels away from t = 0 and t = T");

  Eigen::MatrixXd dtu = Eigen::MatrixXd::Zero(grid.node_count(), levels);
  Eigen::MatrixXd hess = dtu;
  Eigen::MatrixXd grad = dtu;
  for (int k = 1; k + 1 < levels; ++k) {
    if (tw[k] <= 0.0)
      continue;
    dtu.col(k) = (u.level(k + 1) - u.level(k - 1)) / (2.0 * grid.dt());
    hess.col(k) = hessian_frobenius(grid, u.level(k));
    grad.col(k) = gradient_central(grid, u.level(k)).colwise().norm().transpose().array().pow(gamma).matrix();
  }
  W21qNorms out;
  out.time_derivative = lq_norm(grid, dtu, q, sub);
  out.hessian = lq_norm(grid, hess, q, sub);
  out.gradient_power = lq_norm(grid, grad, q, sub);
  return out;
}

} // namespace vhj
