#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "legpinch/immersion.hpp"

namespace legpinch {

inline constexpr const char* kReportVersion = "1";

/// Overridable tolerances, one per --tol-<name> flag.
struct Tolerances {
  double trace = 1e-10;
  double sym = 1e-10;
  double lagrange = 1e-8;
  double fd = 1e-6;
  /// Closed-form agreement of scanned fields.
  double scan = 1e-5;
  double identity = 1e-9;
};

struct RunConfig {
  /// identities | theta | scan | catalog | report
  std::string command;
  /// Tensor files (theta), a catalog name (scan) or prior reports (report).
  std::vector<std::string> inputs;
  std::optional<int> n;
  std::uint64_t seed = 1;
  long samples = 1000;
  /// Points per axis; a single value applies to every axis.
  std::vector<int> grid;
  double h = kDefaultStep;
  Tolerances tol;
  /// json | csv
  std::string format = "json";
  /// Empty writes to the output stream passed to run().
  std::string out;
  /// 0 selects the default thread count. Does not affect the output.
  int threads = 0;
};

/// Raised for invalid configurations and unreadable inputs.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Executes one command. Returns 0 when every asserted check passes, 1 on a
/// tolerance failure and 2 on a usage error (message written to err).
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace legpinch
