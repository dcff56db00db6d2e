#include "vhj/config.hpp"

#include "vhj/exponents.hpp"
#include "vhj/field_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace vhj {

namespace {

enum class Kind
{
  number,
  integer,
  list,
  text
};

struct KeyInfo
{
  const char* key;
  const char* value;
  Kind kind;
  bool hashed = true;
};

// Every key the tool understands, with its default.
const std::vector<KeyInfo>& table()
{
  static const std::vector<KeyInfo> t = {
    {"dim", "1", Kind::integer},
    {"R", "1", Kind::number},
    {"dx", "0.03125", Kind::number},
    {"T", "1", Kind::number},
    {"dt", "0.0078125", Kind::number},
    {"mask", "box", Kind::text},
    {"gamma", "3", Kind::number},
    {"sigma", "1", Kind::number},
    {"h0", "1", Kind::number},
    {"h1", "1", Kind::number},
    {"h_profile", "const", Kind::text},
    {"q", "0", Kind::number},
    {"alpha", "0.5", Kind::number},
    {"z", "1", Kind::number},
    {"c", "0", Kind::number},
    {"manufactured", "sine", Kind::text},
    {"f_file", "", Kind::text},
    {"field", "", Kind::text},
    {"drift", "zero", Kind::text},
    {"source", "0", Kind::list},
    {"y0", "1", Kind::list},
    {"sub_cylinder", "", Kind::list},
    {"oracle", "0", Kind::integer},
    {"selection", "nonlinear", Kind::text},
    {"levels", "3", Kind::integer},
    {"seed", "20240601", Kind::integer},
    {"samples", "100000", Kind::integer},
    {"pair_budget", "100000000", Kind::integer},
    {"pair_samples", "10000000", Kind::integer},
    {"gamma_prime_list", "1.1,1.3,1.5,1.7,1.9", Kind::list},
    {"amplitude", "1", Kind::number},
    {"R_list", "8", Kind::list},
    {"tau_list", "4,16,64", Kind::list},
    {"q_list", "1.6,2.4", Kind::list},
    {"eps_list", "0.25,0.125,0.0625", Kind::list},
    {"dx_list", "0.015625,0.0078125", Kind::list},
    {"dt_factor", "4", Kind::number},
    {"t_singular", "0.5", Kind::number},
    {"f0", "1", Kind::number},
    {"c1", "1", Kind::number},
    {"out", "vhj", Kind::text, false},
  };
  return t;
}

const KeyInfo* lookup(const std::string& key)
{
  for (const auto& k : table())
    if (key == k.key)
      return &k;
  return nullptr;
}

std::string trim(const std::string& s)
{
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& key, const std::string& text)
{
  const std::string s = trim(text);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v))
    throw std::invalid_argument(key + " must be a finite number, got '" + text + "'");
  return v;
}

std::string format_number(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> parse_list(const std::string& key, const std::string& text)
{
  std::vector<double> out;
  if (trim(text).empty())
    return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    out.push_back(parse_number(key, item));
  return out;
}

// Canonical spelling, so that "3" and "3.0" hash alike.
std::string normalize(const KeyInfo& info, const std::string& value)
{
  switch (info.kind) {
    case Kind::number:
      return format_number(parse_number(info.key, value));
    case Kind::integer: {
      const double v = parse_number(info.key, value);
      if (v != std::floor(v) || std::fabs(v) > 9.0e15)
        throw std::invalid_argument(std::string(info.key) + " must be an integer, got '" + value + "'");
      return format_number(v);
    }
    case Kind::list: {
      std::string out;
      for (double v : parse_list(info.key, value)) {
        if (!out.empty())
          out += ',';
        out += format_number(v);
      }
      return out;
    }
    case Kind::text:
      return trim(value);
  }
  return value;
}

void require(bool ok, const std::string& message)
{
  if (!ok)
    throw std::invalid_argument(message);
}

} // namespace

Config::Config()
{
  for (const auto& k : table())
    values_[k.key] = normalize(k, k.value);
}

Config Config::parse(const std::string& text)
{
  Config cfg;
  std::set<std::string> seen;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const std::string s = trim(line);
    if (s.empty() || s[0] == '#')
      continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("line " + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(s.substr(0, eq));
    const KeyInfo* info = lookup(key);
    if (!info)
      throw std::invalid_argument("unknown key '" + key + "'");
    if (!seen.insert(key).second)
      throw std::invalid_argument("duplicate key '" + key + "'");
    cfg.values_[key] = normalize(*info, s.substr(eq + 1));
  }
  cfg.validate();
  return cfg;
}

Config Config::load(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw std::invalid_argument("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

void Config::set(const std::string& key, const std::string& value)
{
  const KeyInfo* info = lookup(key);
  if (!info)
    throw std::invalid_argument("unknown key '" + key + "'");
  values_[key] = normalize(*info, value);
  validate();
}

const std::string& Config::get(const std::string& key) const
{
  const auto it = values_.find(key);
  if (it == values_.end())
    throw std::invalid_argument("unknown key '" + key + "'");
  return it->second;
}

double Config::number(const std::string& key) const { return parse_number(key, get(key)); }

int Config::integer(const std::string& key) const { return static_cast<int>(number(key)); }

std::uint64_t Config::unsigned_integer(const std::string& key) const
{
  const double v = number(key);
  require(v >= 0, key + " must be nonnegative");
  return static_cast<std::uint64_t>(v);
}

std::vector<double> Config::list(const std::string& key) const { return parse_list(key, get(key)); }

Point Config::point(const std::string& key) const
{
  const auto v = list(key);
  require(!v.empty() && v.size() <= 2, key + " must have one or two coordinates");
  Point p = Point::Zero();
  for (std::size_t i = 0; i < v.size(); ++i)
    p[static_cast<int>(i)] = v[i];
  return p;
}

GridSpec Config::grid() const
{
  GridSpec g;
  g.dim = integer("dim");
  g.half_width = number("R");
  g.dx = number("dx");
  g.horizon = number("T");
  g.dt = number("dt");
  g.ball = get("mask") == "ball";
  return g;
}

double Config::gamma_prime() const { return conjugate_exponent(number("gamma")); }
double Config::q0() const { return critical_integrability(number("gamma"), integer("dim")); }
double Config::alpha0() const { return critical_holder(number("gamma")); }

void Config::validate() const
{
  require(number("gamma") > 2.0, "gamma must exceed 2");
  const double sigma = number("sigma");
  require(sigma > 0.0 && sigma <= 1.0, "sigma must lie in (0, 1]");
  require(number("h0") > 0.0, "h0 must be positive");
  require(number("h1") >= number("h0"), "h1 must be at least h0");
  const int dim = integer("dim");
  require(dim == 1 || dim == 2, "dim must be 1 or 2");
  require(number("R") > 0.0, "R must be positive");
  require(number("dx") > 0.0, "dx must be positive");
  require(number("T") > 0.0, "T must be positive");
  require(number("dt") > 0.0, "dt must be positive");
  require(get("mask") == "box" || get("mask") == "ball", "mask must be box or ball");
  require(get("h_profile") == "const" || get("h_profile") == "cosine", "h_profile must be const or cosine");
  require(number("q") >= 0.0, "q must be nonnegative (0 selects q0)");
  const double alpha = number("alpha");
  require(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0, 1)");
  require(number("z") > 0.0, "z must be positive");
  require(number("c") >= 0.0, "c must be nonnegative");
  require(get("selection") == "nonlinear" || get("selection") == "weighted",
          "selection must be nonlinear or weighted");
  require(integer("levels") >= 2, "levels must be at least 2");
  require(number("seed") >= 0.0, "seed must be nonnegative");
  require(integer("samples") > 0, "samples must be positive");
  require(number("pair_budget") > 0.0, "pair_budget must be positive");
  require(number("pair_samples") > 0.0, "pair_samples must be positive");
  for (double g : list("gamma_prime_list"))
    require(g > 1.0 && g < 2.0, "gamma_prime_list entries must lie in (1, 2)");
  require(number("amplitude") > 0.0, "amplitude must be positive");
  for (const char* key : {"R_list", "tau_list", "q_list", "eps_list", "dx_list"}) {
    const auto v = list(key);
    require(!v.empty(), std::string(key) + " must not be empty");
    for (double x : v)
      require(x > 0.0, std::string(key) + " entries must be positive");
  }
  require(number("dt_factor") > 0.0, "dt_factor must be positive");
  require(number("f0") > 0.0 && number("c1") > 0.0, "f0 and c1 must be positive");
  const auto sub = list("sub_cylinder");
  require(sub.empty() || static_cast<int>(sub.size()) == 2 * dim + 2,
          "sub_cylinder needs lo, hi per axis then t0,t1");
  const auto src = list("source");
  require(!src.empty() && src.size() <= 2, "source must have one or two coordinates");
}

std::string Config::canonical() const
{
  std::string out;
  for (const auto& [key, value] : values_) {
    if (!lookup(key)->hashed)
      continue;
    out += key;
    out += '=';
    out += value;
    out += '\n';
  }
  return out;
}

std::string Config::hash() const
{
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : canonical()) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

const std::vector<std::string>& Config::known_keys()
{
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& info : table())
      k.emplace_back(info.key);
    return k;
  }();
  return keys;
}

const char* tool_version() { return "vhjlab 1.0.0"; }

void write_manifest(const std::string& path, const Config& cfg, const std::string& subcommand,
                    const std::vector<std::pair<std::string, double>>& timings,
                    const std::vector<std::string>& outputs)
{
  std::ofstream os(path);
  if (!os)
    throw std::runtime_error("cannot write manifest '" + path + "'");
  os << "# run manifest\n";
  os << "config_hash=" << cfg.hash() << '\n';
  os << "subcommand=" << subcommand << '\n';
  os << "tool_version=" << tool_version() << '\n';
  os << "seed=" << cfg.get("seed") << '\n';
  for (const auto& key : Config::known_keys())
    os << "param." << key << '=' << cfg.get(key) << '\n';
  os << "derived.gamma_prime=" << format_number(cfg.gamma_prime()) << '\n';
  os << "derived.q0=" << format_number(cfg.q0()) << '\n';
  os << "derived.alpha0=" << format_number(cfg.alpha0()) << '\n';
  for (const auto& [name, seconds] : timings)
    os << "timing." << name << '=' << format_number(seconds) << '\n';
  for (const auto& f : outputs)
    os << "output=" << f << '\n';
}

} // namespace vhj
