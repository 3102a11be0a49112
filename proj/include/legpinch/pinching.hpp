#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "legpinch/cubic_spectrum.hpp"
#include "legpinch/sym_cubic.hpp"

namespace legpinch {

/// RHS - LHS of
///   gram - |sigma|^4 / 5 <= (2 kappa / 5) (|sigma|^2 - (5 kappa - 3)/(2 kappa) theta^2) |sigma|^2
/// evaluated on the (x, y, z) invariants, with theta^2 = x. Throws DomainError
/// for kappa < 7/5.
double kappa_inequality_gap(const Canonical3& c, double kappa);

/// Ambient constant in (1/2) Lap |sigma|^2 = |grad sigma|^2 + c |sigma|^2 - 5 gram + |sigma|^4.
enum class Ambient {
  sphere4,            ///< Legendrian in S^7, c = 4
  nearly_kahler_15_4  ///< Lagrangian in nearly Kaehler S^6, c = 15/4
};

struct LaplacianBound {
  /// (10/7)(1 + theta^2) or 75/56 + (10/7) theta^2.
  double threshold = 0.0;
  /// (14/5)(threshold - |sigma|^2)|sigma|^2
  double bound = 0.0;
  /// c |sigma|^2 - 5 gram + |sigma|^4
  double algebraic = 0.0;
  /// algebraic - bound; holds iff >= -1e-9.
  double slack = 0.0;
  bool holds = false;
};

LaplacianBound laplacian_lower_bound(const Canonical3& c, Ambient ambient);

/// Newton's inequality for m = n - 1 nonnegative numbers:
///   e3(a) <= 2(n-3)/(3(n-2)) e2(a)^2 / e1(a).
/// Returns RHS - LHS. Throws DomainError for m < 2 or sum(a) <= 0.
double newton_gap(std::span<const double> a);

struct BetaChain {
  /// mu1^2 + 3 sum_{j>1} mu_j^2
  double beta = 0.0;
  /// (n+1) mu1 - mu1^3 + 2 sum_{j>1} mu_j^3 - 3 mu1 sum_{j>1} mu_j^2
  double stationarity = 0.0;
  /// beta / ((n+2)/sqrt(n) mu1)
  double bound_ratio = 0.0;
  bool passes = false;
};

/// Throws DomainError unless mu has n entries summing to 0 (within 1e-10),
/// mu(0) is the maximum and mu(0) > 0.
BetaChain beta_chain_check(std::span<const double> mu, int n);

struct PinchOptions {
  double tol_trace = kTolTrace;
  ThetaOptions theta;
};

struct PinchFlags {
  bool main = false;
  std::optional<bool> n3_quadratic;
  std::optional<bool> thm2;
  std::optional<bool> appendix;
};

/// Pointwise pinching record. Gaps are signed, positive meaning pinched.
struct PinchReport {
  int n = 0;
  double norm_sq = 0.0;
  double theta = 0.0;
  double beta = 0.0;
  std::vector<double> mu;
  /// (n+2)/sqrt(n) theta - |B|^2
  double gap_main = 0.0;
  /// 2 + theta^2 - |B|^2  (n = 3)
  std::optional<double> gap_n3_quadratic;
  /// (10/7)(1 + theta^2) - |B|^2  (n = 3)
  std::optional<double> gap_thm2;
  /// 75/56 + (10/7) theta^2 - |B|^2  (n = 3)
  std::optional<double> gap_appendix;
  double simons_gap = 0.0;
  double lagrange_residual = 0.0;
  bool multiplicity_one = false;
  PinchFlags flags;
  /// Internal consistency checks that failed on this input.
  std::vector<std::string> violations;
};

/// Throws TraceError for non-traceless input.
PinchReport pinching_report(const SymCubic& sigma, const PinchOptions& opts = {});

}  // namespace legpinch
