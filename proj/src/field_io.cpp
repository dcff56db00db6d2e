#include "vhj/field_io.hpp"

#include <fstream>
#include <sstream>
#include <vector>

namespace vhj {

namespace {

std::vector<std::string> split(const std::string& text, char sep)
{
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(text);
  while (std::getline(is, item, sep))
    out.push_back(item);
  return out;
}

double to_double(const std::string& s, const char* what)
{
  try {
    size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size())
      throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string("cannot parse ") + what + " from '" + s + "'");
  }
}

} // namespace

GridSpec parse_grid_spec(const std::string& text)
{
  const auto parts = split(text, ',');
  if (parts.size() != 5 && parts.size() != 6)
    throw std::invalid_argument("grid must be \"N,R,dx,T,dt[,box|ball]\"");
  GridSpec spec;
  spec.dim = static_cast<int>(to_double(parts[0], "N"));
  spec.half_width = to_double(parts[1], "R");
  spec.dx = to_double(parts[2], "dx");
  spec.horizon = to_double(parts[3], "T");
  spec.dt = to_double(parts[4], "dt");
  if (parts.size() == 6) {
    if (parts[5] == "ball")
      spec.ball = true;
    else if (parts[5] != "box")
      throw std::invalid_argument("grid mask must be box or ball");
  }
  return spec;
}

void write_field_csv(std::ostream& os, const ScalarField& u)
{
  const Grid& grid = u.grid();
  os.precision(17);
  os << "# grid: " << grid.spec().to_string() << '\n';
  for (int k = 0; k < grid.level_count(); ++k) {
    const double t = grid.time(k);
    for (int node : grid.active_nodes()) {
      const Point x = grid.position(node);
      os << t << ',' << x[0];
      if (grid.dim() == 2)
        os << ',' << x[1];
      os << ',' << u(node, k) << '\n';
    }
  }
}

void write_field_csv(const std::string& path, const ScalarField& u)
{
  std::ofstream os(path);
  if (!os)
    throw std::runtime_error("cannot open " + path + " for writing");
  write_field_csv(os, u);
}

ScalarField read_field_csv(std::istream& is)
{
  std::string line;
  if (!std::getline(is, line) || line.rfind("# grid:", 0) != 0)
    throw std::invalid_argument("field CSV must start with '# grid: N,R,dx,T,dt,mask'");
  std::string spec_text = line.substr(7);
  spec_text.erase(0, spec_text.find_first_not_of(' '));
  auto grid = make_grid(parse_grid_spec(spec_text));

  ScalarField u(grid);
  Eigen::MatrixXi seen = Eigen::MatrixXi::Zero(grid->node_count(), grid->level_count());
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#')
      continue;
    const auto parts = split(line, ',');
    if (static_cast<int>(parts.size()) != grid->dim() + 2)
      throw std::invalid_argument("malformed field row: " + line);
    const double t = to_double(parts[0], "t");
    Point x(to_double(parts[1], "x1"), grid->dim() == 2 ? to_double(parts[2], "x2") : 0.0);
    const int k = grid->level_of(t);
    const int node = grid->nearest_node(x);
    if (k < 0 || !grid->active(node) || (grid->position(node) - x).norm() > 1e-9 * grid->dx())
      throw std::invalid_argument("field row does not sit on an active grid node: " + line);
    u(node, k) = to_double(parts.back(), "value");
    ++seen(node, k);
  }
  for (int k = 0; k < grid->level_count(); ++k)
    for (int node : grid->active_nodes())
      if (seen(node, k) != 1)
        throw std::invalid_argument("field CSV must list every active node and level exactly once");
  return u;
}

ScalarField read_field_csv(const std::string& path)
{
  std::ifstream is(path);
  if (!is)
    throw std::runtime_error("cannot open " + path);
  return read_field_csv(is);
}

} // namespace vhj
