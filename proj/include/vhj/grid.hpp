#pragma once

#include <Eigen/Core>

#include <array>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace vhj {

/// Spatial point. One-dimensional grids keep the second coordinate at zero.
using Point = Eigen::Vector2d;

/// Thrown when a solver cannot continue (CFL exhaustion, non-finite values).
class NumericalError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct GridSpec
{
  int dim = 1;
  double half_width = 1.0; ///< R: the box is [-R, R]^N, the ball is |x| < R
  double dx = 0.125;
  double horizon = 1.0; ///< T (or tau): levels t_k = k dt, k = 0..T/dt
  double dt = 0.125;
  bool ball = false;

  std::string to_string() const;
};

bool operator==(const GridSpec& a, const GridSpec& b);

/// Uniform Cartesian space-time lattice with an optional ball mask.
///
/// Nodes are numbered i + n * j (n points per axis). A node is active when it
/// lies in the domain; an active node is a boundary node when one of its 2N
/// axis neighbours is missing or inactive, and interior otherwise. Dirichlet
/// data lives on boundary nodes.
class Grid
{
public:
  explicit Grid(const GridSpec& spec);

  const GridSpec& spec() const { return spec_; }
  int dim() const { return spec_.dim; }
  double dx() const { return spec_.dx; }
  double dt() const { return spec_.dt; }
  double half_width() const { return spec_.half_width; }
  double horizon() const { return spec_.horizon; }

  int points_per_axis() const { return n_; }
  int node_count() const { return node_count_; }
  int level_count() const { return levels_; }
  double cell_volume() const;

  double time(int level) const { return level * spec_.dt; }
  double coordinate(int index) const { return -spec_.half_width + index * spec_.dx; }
  Point position(int node) const;
  std::array<int, 2> lattice(int node) const { return {node % n_, node / n_}; }
  int node_at(int i, int j = 0) const { return i + n_ * j; }

  bool active(int node) const { return active_[node]; }
  bool boundary(int node) const { return boundary_[node]; }
  bool interior(int node) const { return active_[node] && !boundary_[node]; }

  const std::vector<int>& active_nodes() const { return active_list_; }
  const std::vector<int>& interior_nodes() const { return interior_list_; }
  const std::vector<int>& boundary_nodes() const { return boundary_list_; }

  /// Neighbour along `axis` in direction `dir` (+1/-1), or -1 when it is off
  /// the lattice or inactive.
  int neighbor(int node, int axis, int dir) const;

  /// Outward unit normal at a boundary node: radial on balls, face normal on
  /// boxes (normalised diagonal at corners).
  Point outward_normal(int node) const;

  /// Euclidean distance from x to the continuum boundary of the domain.
  double boundary_distance(const Point& x) const;

  bool contains(const Point& x) const;

  /// Nearest lattice node (clamped to the lattice).
  int nearest_node(const Point& x) const;

  /// Level index of time t if t is a grid level (within 1e-9 dt), else -1.
  int level_of(double t) const;

private:
  GridSpec spec_;
  int n_ = 0;
  int node_count_ = 0;
  int levels_ = 0;
  std::vector<char> active_;
  std::vector<char> boundary_;
  std::vector<int> active_list_;
  std::vector<int> interior_list_;
  std::vector<int> boundary_list_;
};

using GridPtr = std::shared_ptr<const Grid>;

/// Validates the grid parameters and builds the lattice. Throws std::invalid_argument
/// naming the violated field.
GridPtr make_grid(const GridSpec& spec);

/// Sampled scalar function on all lattice nodes and time levels. Column k holds
/// level k; inactive nodes carry zero.
class ScalarField
{
public:
  ScalarField() = default;
  explicit ScalarField(GridPtr grid);
  ScalarField(GridPtr grid, Eigen::MatrixXd values);

  template <typename F>
  static ScalarField sample(GridPtr grid, F&& fn)
  {
    ScalarField out(grid);
    for (int k = 0; k < grid->level_count(); ++k) {
      const double t = grid->time(k);
      for (int node : grid->active_nodes())
        out.values_(node, k) = fn(grid->position(node), t);
    }
    return out;
  }

  static ScalarField constant(GridPtr grid, double c);

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }

  Eigen::MatrixXd& values() { return values_; }
  const Eigen::MatrixXd& values() const { return values_; }

  double operator()(int node, int level) const { return values_(node, level); }
  double& operator()(int node, int level) { return values_(node, level); }

  auto level(int k) { return values_.col(k); }
  auto level(int k) const { return values_.col(k); }

  /// Throws std::invalid_argument if any active value is not finite.
  void require_finite(const char* what) const;

private:
  GridPtr grid_;
  Eigen::MatrixXd values_;
};

/// Sampled vector field; comp[a](node, level) is the a-th component.
class VectorField
{
public:
  VectorField() = default;
  explicit VectorField(GridPtr grid);

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }

  Eigen::MatrixXd& component(int axis) { return comp_[axis]; }
  const Eigen::MatrixXd& component(int axis) const { return comp_[axis]; }

  Point at(int node, int level) const { return {comp_[0](node, level), comp_[1](node, level)}; }
  void set(int node, int level, const Point& v);

  /// max |b| over active nodes and levels.
  double max_norm() const;

  VectorField scaled(double factor) const;

private:
  GridPtr grid_;
  std::array<Eigen::MatrixXd, 2> comp_;
};

/// Space-time cylinder Omega x [t0, t1] with Omega a box or a closed ball.
struct Cylinder
{
  enum class Shape
  {
    box,
    ball
  };

  Shape shape = Shape::box;
  Point lo = Point::Zero();
  Point hi = Point::Zero();
  Point center = Point::Zero();
  double radius = 0.0;
  double t0 = 0.0;
  double t1 = 0.0;

  static Cylinder box(const Point& lo, const Point& hi, double t0, double t1);
  static Cylinder ball(const Point& center, double radius, double t0, double t1);
  /// Whole domain of the grid: the box [-R,R]^N, or the ball |x| <= R.
  static Cylinder of(const Grid& grid);

  bool contains_space(const Point& x, int dim) const;
  bool contains(const Point& x, double t, int dim) const;

  /// d(x, boundary of Omega) for x in Omega.
  double boundary_distance(const Point& x, int dim) const;
};

/// Node/level membership lists of a cylinder on a grid (active nodes only).
struct CylinderNodes
{
  std::vector<int> nodes;
  std::vector<int> levels;
};

CylinderNodes nodes_in(const Grid& grid, const Cylinder& q);

enum class DistanceKind
{
  parabolic, ///< d = d(x, dOmega) + |b - t|^{1/2}
  holder     ///< d_alpha = d(x, dOmega)^alpha + |b - t|^{alpha / gamma}
};

/// Distance from (x, t) to the backward parabolic boundary
/// dOmega x (a, b) u Omega x {b}. Rejects points outside the closed cylinder.
double parabolic_distance(const Point& x, double t, const Cylinder& q, int dim, DistanceKind kind,
                          double alpha = 1.0, double gamma = 2.0);

} // namespace vhj
