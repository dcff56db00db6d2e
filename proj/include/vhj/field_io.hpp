#pragma once

#include "vhj/grid.hpp"

#include <iosfwd>
#include <string>

namespace vhj {

// Field CSV: a header line "# grid: N,R,dx,T,dt,mask" followed by one row
// "t,x1[,x2],value" per active node and level, decimal text with 17
// significant digits.

void write_field_csv(std::ostream& os, const ScalarField& u);
void write_field_csv(const std::string& path, const ScalarField& u);

/// Parses the format written by write_field_csv. Every active node and level
/// must be present exactly once.
ScalarField read_field_csv(std::istream& is);
ScalarField read_field_csv(const std::string& path);

/// Parses "N,R,dx,T,dt[,box|ball]".
GridSpec parse_grid_spec(const std::string& text);

} // namespace vhj
