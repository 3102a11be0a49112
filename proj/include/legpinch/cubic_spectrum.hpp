#pragma once

#include <cstdint>
#include <optional>

#include <Eigen/Dense>

#include "legpinch/sym_cubic.hpp"

namespace legpinch {

/// Tolerance on the Lagrange condition sigma(e1,e1,.) = theta e1 and on the
/// n = 3 canonical form.
inline constexpr double kTolLagrange = 1e-8;
inline constexpr double kTolCanon = 1e-8;

/// sum sigma_{ijk} x^i x^j x^k. Throws DimensionError on size mismatch.
double cubic_form(const SymCubic& sigma, const Eigen::VectorXd& x);

/// sigma(x, x, .)
Eigen::VectorXd cubic_gradient(const SymCubic& sigma, const Eigen::VectorXd& x);

/// sigma(x, ., .)
Eigen::MatrixXd cubic_slice(const SymCubic& sigma, const Eigen::VectorXd& x);

struct ThetaOptions {
  /// Random starts, in addition to one warm start per slice.
  int starts = 32;
  int max_iter = 1000;
  /// Accepted Lagrange residual (absolute, max-norm).
  double tol = kTolLagrange;
  /// Cross-check against theta_bruteforce (n <= 4).
  bool oracle = false;
  std::uint64_t seed = 0x9e3779b97f4a7c15ULL;
};

/// Maximizer of the cubic form on the unit sphere together with the spectrum
/// of sigma(e1, ., .).
struct AdaptedSpectrum {
  double theta = 0.0;
  Eigen::VectorXd e1;
  /// mu(0) = theta; mu(1..) are the eigenvalues on the complement of e1,
  /// sorted descending.
  Eigen::VectorXd mu;
  /// Orthonormal; row 0 is e1, row i the eigenvector of mu(i).
  Eigen::MatrixXd basis;
  double lagrange_residual = 0.0;
  /// Every converged start reaching theta - tol ended within 10 tol of e1.
  bool multiplicity_one = false;
  std::optional<double> oracle_theta;
};

/// Maximizes sigma(X,X,X) over |X| = 1 by a shifted symmetric power iteration
/// with a Newton finish, from several starts. Zero input returns theta = 0
/// with e1 the first coordinate vector. Throws ConvergenceError when no start
/// meets opts.tol within opts.max_iter iterations, or when opts.oracle is set
/// and the brute-force value disagrees by more than 1e-4 relative.
AdaptedSpectrum theta(const SymCubic& sigma, const ThetaOptions& opts = {});

/// Independent lower bound on theta: cube-face grid on the sphere with
/// 2n * resolution^(n-1) directions; the best grid points are refined by at
/// most 50 projected-gradient steps. resolution <= 0 picks a default giving
/// at least 10^6 directions. Throws DimensionError for n > 4.
double theta_bruteforce(const SymCubic& sigma, int resolution = 0);

/// Uniqueness of the maximizing direction. Seeds a direction set (cube-face
/// grid for n <= 4, a fixed pseudo-random set otherwise), refines the best
/// seeds to local maxima and returns true iff each one reaching
/// spectrum.theta - tol lies within 10 tol of spectrum.e1. The form is odd,
/// so e and -e are not identified.
bool multiplicity_one(const SymCubic& sigma, const AdaptedSpectrum& spectrum, double tol = kTolLagrange);

/// n = 3 normal form: in the rotated basis
///   sigma_1 = diag(l1 + l2, -l1, -l2)
///   sigma_2 = [0 -l1 0; -l1 m1 m2; 0 m2 -m1]
///   sigma_3 = [0 0 -l2; 0 m2 -m1; -l2 -m1 -m2]
/// with x = (l1 + l2)^2, y = (l1 - l2)^2, z = 4 (m1^2 + m2^2).
struct Canonical3 {
  double lambda1 = 0.0, lambda2 = 0.0, mu1 = 0.0, mu2 = 0.0;
  double x = 0.0, y = 0.0, z = 0.0;
  /// Rows are the canonical basis vectors.
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  double theta = 0.0;
  /// Directly summed |sigma|^2 and sum <sigma_i, sigma_j>^2.
  double norm_sq = 0.0;
  double gram = 0.0;
  /// Max deviation of the rotated tensor from the displayed pattern.
  double pattern_residual = 0.0;

  /// (5/2) x + (3/2) y + z
  double norm_sq_closed() const { return 2.5 * x + 1.5 * y + z; }
  /// (11/4) x^2 + (3/4) y^2 + (1/2) z^2 + (9/2) xy + xz + (3/2) yz
  double gram_closed() const {
    return 2.75 * x * x + 0.75 * y * y + 0.5 * z * z + 4.5 * x * y + x * z + 1.5 * y * z;
  }
};

/// Throws DimensionError for n != 3 and TraceError for non-traceless input.
Canonical3 canonical3(const SymCubic& sigma, double tol_trace = kTolTrace);

/// The canonical tensor in the canonical basis.
SymCubic canonical3_tensor(double lambda1, double lambda2, double mu1, double mu2);

/// Canonical tensor mapped back to the original coordinates.
SymCubic reconstruct(const Canonical3& c);

}  // namespace legpinch
