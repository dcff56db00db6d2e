#include "vhj/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace vhj {

namespace {

constexpr double kLatticeTol = 1e-9;

int integer_ratio(double num, double den, const char* what, int minimum)
{
  const double ratio = num / den;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > kLatticeTol * std::max(1.0, ratio))
    throw std::invalid_argument(std::string(what) + " must be an integer multiple");
  if (rounded < minimum)
    throw std::invalid_argument(std::string(what) + " must be at least " + std::to_string(minimum));
  return static_cast<int>(rounded);
}

} // namespace

std::string GridSpec::to_string() const
{
  std::ostringstream os;
  os.precision(17);
  os << dim << ',' << half_width << ',' << dx << ',' << horizon << ',' << dt << ',' << (ball ? "ball" : "box");
  return os.str();
}

bool operator==(const GridSpec& a, const GridSpec& b)
{
  return a.dim == b.dim && a.half_width == b.half_width && a.dx == b.dx && a.horizon == b.horizon &&
         a.dt == b.dt && a.ball == b.ball;
}

Grid::Grid(const GridSpec& spec)
  : spec_(spec)
{
  if (spec.dim != 1 && spec.dim != 2)
    throw std::invalid_argument("dim must be 1 or 2");
  if (!(spec.dx > 0.0))
    throw std::invalid_argument("dx must be positive");
  if (!(spec.dt > 0.0))
    throw std::invalid_argument("dt must be positive");
  if (!(spec.half_width > 0.0))
    throw std::invalid_argument("half_width (R) must be positive");
  if (!(spec.horizon > 0.0))
    throw std::invalid_argument("horizon (T) must be positive");

  const int cells = integer_ratio(spec.half_width, spec.dx, "R/dx", 2);
  const int steps = integer_ratio(spec.horizon, spec.dt, "T/dt", 2);

  n_ = 2 * cells + 1;
  node_count_ = spec.dim == 1 ? n_ : n_ * n_;
  levels_ = steps + 1;

  active_.assign(node_count_, 1);
  boundary_.assign(node_count_, 0);
  if (spec.ball) {
    for (int node = 0; node < node_count_; ++node)
      active_[node] = position(node).norm() < spec.half_width * (1.0 - 1e-12);
  }

  for (int node = 0; node < node_count_; ++node) {
    if (!active_[node])
      continue;
    active_list_.push_back(node);
    bool edge = false;
    for (int axis = 0; axis < spec.dim && !edge; ++axis)
      edge = neighbor(node, axis, -1) < 0 || neighbor(node, axis, +1) < 0;
    boundary_[node] = edge;
    (edge ? boundary_list_ : interior_list_).push_back(node);
  }
}

double Grid::cell_volume() const
{
  return spec_.dim == 1 ? spec_.dx : spec_.dx * spec_.dx;
}

Point Grid::position(int node) const
{
  const auto [i, j] = lattice(node);
  return {coordinate(i), spec_.dim == 2 ? coordinate(j) : 0.0};
}

int Grid::neighbor(int node, int axis, int dir) const
{
  auto ij = lattice(node);
  ij[axis] += dir;
  if (ij[axis] < 0 || ij[axis] >= n_)
    return -1;
  const int other = node_at(ij[0], ij[1]);
  return active_[other] ? other : -1;
}

Point Grid::outward_normal(int node) const
{
  const Point x = position(node);
  if (spec_.ball) {
    const double r = x.norm();
    return r > 0.0 ? Point(x / r) : Point(1.0, 0.0);
  }
  Point nu = Point::Zero();
  const auto ij = lattice(node);
  for (int axis = 0; axis < spec_.dim; ++axis) {
    if (ij[axis] == 0)
      nu[axis] = -1.0;
    else if (ij[axis] == n_ - 1)
      nu[axis] = 1.0;
  }
  const double len = nu.norm();
  return len > 0.0 ? Point(nu / len) : nu;
}

double Grid::boundary_distance(const Point& x) const
{
  if (spec_.ball)
    return std::max(0.0, spec_.half_width - x.norm());
  double d = spec_.half_width - std::abs(x[0]);
  if (spec_.dim == 2)
    d = std::min(d, spec_.half_width - std::abs(x[1]));
  return std::max(0.0, d);
}

bool Grid::contains(const Point& x) const
{
  const double tol = kLatticeTol * spec_.dx;
  if (spec_.ball)
    return x.norm() <= spec_.half_width + tol;
  for (int axis = 0; axis < spec_.dim; ++axis)
    if (std::abs(x[axis]) > spec_.half_width + tol)
      return false;
  return true;
}

int Grid::nearest_node(const Point& x) const
{
  auto index = [&](double c) {
    const int i = static_cast<int>(std::lround((c + spec_.half_width) / spec_.dx));
    return std::clamp(i, 0, n_ - 1);
  };
  return node_at(index(x[0]), spec_.dim == 2 ? index(x[1]) : 0);
}

int Grid::level_of(double t) const
{
  const double k = t / spec_.dt;
  const double r = std::round(k);
  if (std::abs(k - r) > kLatticeTol || r < 0 || r >= levels_)
    return -1;
  return static_cast<int>(r);
}

GridPtr make_grid(const GridSpec& spec)
{
  return std::make_shared<const Grid>(spec);
}

ScalarField::ScalarField(GridPtr grid)
  : grid_(std::move(grid))
  , values_(Eigen::MatrixXd::Zero(grid_->node_count(), grid_->level_count()))
{
}

ScalarField::ScalarField(GridPtr grid, Eigen::MatrixXd values)
  : grid_(std::move(grid))
  , values_(std::move(values))
{
  if (values_.rows() != grid_->node_count() || values_.cols() != grid_->level_count())
    throw std::invalid_argument("field values do not match the grid shape");
}

ScalarField ScalarField::constant(GridPtr grid, double c)
{
  return sample(std::move(grid), [c](const Point&, double) { return c; });
}

void ScalarField::require_finite(const char* what) const
{
  for (int k = 0; k < values_.cols(); ++k)
    for (int node : grid_->active_nodes())
      if (!std::isfinite(values_(node, k)))
        throw std::invalid_argument(std::string(what) + " has a non-finite value");
}

VectorField::VectorField(GridPtr grid)
  : grid_(std::move(grid))
{
  for (auto& c : comp_)
    c = Eigen::MatrixXd::Zero(grid_->node_count(), grid_->level_count());
}

void VectorField::set(int node, int level, const Point& v)
{
  comp_[0](node, level) = v[0];
  comp_[1](node, level) = v[1];
}

double VectorField::max_norm() const
{
  return (comp_[0].array().square() + comp_[1].array().square()).sqrt().maxCoeff();
}

VectorField VectorField::scaled(double factor) const
{
  VectorField out(grid_);
  out.comp_[0] = comp_[0] * factor;
  out.comp_[1] = comp_[1] * factor;
  return out;
}

Cylinder Cylinder::box(const Point& lo, const Point& hi, double t0, double t1)
{
  Cylinder c;
  c.shape = Shape::box;
  c.lo = lo;
  c.hi = hi;
  c.center = (lo + hi) / 2;
  c.t0 = t0;
  c.t1 = t1;
  return c;
}

Cylinder Cylinder::ball(const Point& center, double radius, double t0, double t1)
{
  Cylinder c;
  c.shape = Shape::ball;
  c.center = center;
  c.radius = radius;
  c.lo = center.array() - radius;
  c.hi = center.array() + radius;
  c.t0 = t0;
  c.t1 = t1;
  return c;
}

Cylinder Cylinder::of(const Grid& grid)
{
  const double r = grid.half_width();
  if (grid.spec().ball)
    return ball(Point::Zero(), r, 0.0, grid.horizon());
  const Point lo(-r, grid.dim() == 2 ? -r : 0.0);
  const Point hi(r, grid.dim() == 2 ? r : 0.0);
  return box(lo, hi, 0.0, grid.horizon());
}

bool Cylinder::contains_space(const Point& x, int dim) const
{
  const double tol = 1e-9 * std::max(1.0, (hi - lo).cwiseAbs().maxCoeff());
  if (shape == Shape::ball) {
    const Point d = x - center;
    const double r = dim == 1 ? std::abs(d[0]) : d.norm();
    return r <= radius + tol;
  }
  for (int axis = 0; axis < dim; ++axis)
    if (x[axis] < lo[axis] - tol || x[axis] > hi[axis] + tol)
      return false;
  return true;
}

bool Cylinder::contains(const Point& x, double t, int dim) const
{
  const double ttol = 1e-9 * std::max(1.0, std::abs(t1 - t0));
  return t >= t0 - ttol && t <= t1 + ttol && contains_space(x, dim);
}

double Cylinder::boundary_distance(const Point& x, int dim) const
{
  if (shape == Shape::ball) {
    const Point d = x - center;
    const double r = dim == 1 ? std::abs(d[0]) : d.norm();
    return std::max(0.0, radius - r);
  }
  double d = std::numeric_limits<double>::infinity();
  for (int axis = 0; axis < dim; ++axis)
    d = std::min({d, x[axis] - lo[axis], hi[axis] - x[axis]});
  return std::max(0.0, d);
}

CylinderNodes nodes_in(const Grid& grid, const Cylinder& q)
{
  CylinderNodes out;
  for (int node : grid.active_nodes())
    if (q.contains_space(grid.position(node), grid.dim()))
      out.nodes.push_back(node);
  const double ttol = 1e-9 * grid.dt();
  for (int k = 0; k < grid.level_count(); ++k)
    if (grid.time(k) >= q.t0 - ttol && grid.time(k) <= q.t1 + ttol)
      out.levels.push_back(k);
  return out;
}

double parabolic_distance(const Point& x, double t, const Cylinder& q, int dim, DistanceKind kind, double alpha,
                          double gamma)
{
  if (!q.contains(x, t, dim))
    throw std::invalid_argument("point lies outside the cylinder");
  const double ds = q.boundary_distance(x, dim);
  const double gap = std::max(0.0, q.t1 - t);
  if (kind == DistanceKind::parabolic)
    return ds + std::sqrt(gap);
  return std::pow(ds, alpha) + std::pow(gap, alpha / gamma);
}

} // namespace vhj
