#pragma once

#include <iosfwd>
#include <string>

#include "legpinch/sym_cubic.hpp"

namespace legpinch {

/// Text format:
///
///   # optional comment lines
///   n
///   i j k value
///   ...
///
/// One line per distinct component, 1-based indices in any order, values in
/// decimal or scientific notation. Components not listed are zero.
SymCubic read_tensor(std::istream& in);
SymCubic read_tensor_file(const std::string& path);

/// Writes every distinct component (i <= j <= k) at 17 significant digits.
void write_tensor(std::ostream& out, const SymCubic& sigma);

/// printf("%.17g").
std::string format_double(double v);

}  // namespace legpinch
