#pragma once

#include <optional>
#include <string>
#include <vector>

#include "legpinch/immersion.hpp"
#include "legpinch/sym_cubic.hpp"

namespace legpinch {

/// Margin kept away from the poles of polar charts.
inline constexpr double kPoleMargin = 1e-3;

struct Expected {
  std::optional<double> norm_sq;
  std::optional<double> theta;
  std::vector<double> mu;
  /// Absent when minimality is not asserted.
  std::optional<bool> minimal;
  bool legendrian = false;
};

struct CatalogEntry {
  std::string name;
  Immersion immersion;
  std::optional<SymCubic> closed_form_sigma;
  Expected expected;
  /// Parameter point at which the defining property is easiest to observe.
  Eigen::VectorXd witness;
};

/// F(t, phi) = (g1(t) phi, g2(t)) with
///   g1 = sqrt(n/(n+1)) exp(i t / sqrt(n)),  g2 = sqrt(1/(n+1)) exp(-i sqrt(n) t),
/// phi in S^(n-1) by nested polar angles. Parameters (t, th_1, ..., th_(n-1)).
/// Throws DimensionError for n < 2.
CatalogEntry calabi_torus(int n);

/// Real slice S^n in R^(n+1) inside C^(n+1), by nested polar angles.
/// Throws DimensionError for n < 1.
CatalogEntry totally_geodesic(int n);

/// (1/sqrt 3)(exp(ia), exp(ib), exp(i(a+b))) in S^5. Not Legendrian.
CatalogEntry control_non_legendrian();

/// Names: calabi<n>, geodesic<n>, control. Throws DomainError for unknown names.
CatalogEntry catalog_entry(const std::string& name);

/// Canonical list of entry names.
std::vector<std::string> catalog_names();

}  // namespace legpinch
