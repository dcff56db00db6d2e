#pragma once

#include "vhj/grid.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace vhj {

/// Resolved run configuration: every known key with its default or the value
/// supplied in a key=value file or on the command line.
class Config
{
public:
  /// Defaults for every known key.
  Config();

  /// Parses key=value lines ('#' comments and blank lines ignored). Unknown
  /// keys and invalid values are rejected with std::invalid_argument.
  static Config parse(const std::string& text);
  static Config load(const std::string& path);

  /// Overrides one key; validates the full set again.
  void set(const std::string& key, const std::string& value);

  const std::string& get(const std::string& key) const;
  double number(const std::string& key) const;
  int integer(const std::string& key) const;
  std::uint64_t unsigned_integer(const std::string& key) const;
  std::vector<double> list(const std::string& key) const;
  Point point(const std::string& key) const;

  GridSpec grid() const;

  double gamma_prime() const;
  double q0() const;
  double alpha0() const;

  /// Sorted key=value lines, derived exponents excluded.
  std::string canonical() const;
  /// FNV-1a 64 of canonical(), as 16 hex digits.
  std::string hash() const;

  static const std::vector<std::string>& known_keys();

private:
  void validate() const;

  std::map<std::string, std::string> values_;
};

/// Writes the manifest: hash, every resolved key, derived exponents, seed,
/// tool version, timings and output files.
void write_manifest(const std::string& path, const Config& cfg, const std::string& subcommand,
                    const std::vector<std::pair<std::string, double>>& timings,
                    const std::vector<std::string>& outputs);

const char* tool_version();

} // namespace vhj
