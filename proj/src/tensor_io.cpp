#include "legpinch/tensor_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "legpinch/errors.hpp"

namespace legpinch {

namespace {

bool skip_line(const std::string& line) {
  const auto pos = line.find_first_not_of(" \t\r");
  return pos == std::string::npos || line[pos] == '#';
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

SymCubic read_tensor(std::istream& in) {
  std::string line;
  int lineno = 0;
  int n = -1;
  std::map<Index3, double> entries;
  while (std::getline(in, line)) {
    ++lineno;
    if (skip_line(line)) continue;
    std::istringstream ls(line);
    if (n < 0) {
      if (!(ls >> n)) throw FormatError("tensor file line " + std::to_string(lineno) + ": expected dimension");
      if (n < 2) throw DimensionError("tensor file: dimension must be >= 2");
      continue;
    }
    long i = 0, j = 0, k = 0;
    double v = 0.0;
    if (!(ls >> i >> j >> k >> v))
      throw FormatError("tensor file line " + std::to_string(lineno) + ": expected 'i j k value'");
    std::string extra;
    if (ls >> extra)
      throw FormatError("tensor file line " + std::to_string(lineno) + ": trailing content");
    for (long idx : {i, j, k})
      if (idx < 1 || idx > n)
        throw IndexError("tensor file line " + std::to_string(lineno) + ": index " +
                         std::to_string(idx) + " outside [1," + std::to_string(n) + "]");
    Index3 key{static_cast<int>(i - 1), static_cast<int>(j - 1), static_cast<int>(k - 1)};
    std::sort(key.begin(), key.end());
    if (entries.contains(key) && entries[key] != v)
      throw IndexError("tensor file line " + std::to_string(lineno) + ": component repeated with a different value");
    entries[key] = v;
  }
  if (n < 0) throw FormatError("tensor file: missing dimension");
  return SymCubic::from_entries(n, entries);
}

SymCubic read_tensor_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open tensor file '" + path + "'");
  return read_tensor(in);
}

void write_tensor(std::ostream& out, const SymCubic& sigma) {
  const int n = sigma.dim();
  out << n << '\n';
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      for (int k = j; k < n; ++k)
        out << i + 1 << ' ' << j + 1 << ' ' << k + 1 << ' ' << format_double(sigma(i, j, k)) << '\n';
}

}  // namespace legpinch
