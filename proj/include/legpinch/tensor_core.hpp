#pragma once

#include <vector>

#include <Eigen/Dense>

#include "legpinch/sym_cubic.hpp"

namespace legpinch {

/// Quadratic and quartic invariants of a cubic form, with
/// sigma_i = (sigma_{ijk})_{jk}:
///   norm_sq = |sigma|^2
///   gram    = sum_{i,j} <sigma_i, sigma_j>^2
///   comm    = sum_{i,j} |[sigma_i, sigma_j]|^2
struct Invariants {
  double norm_sq = 0.0;
  double gram = 0.0;
  double comm = 0.0;
};

Invariants invariants(const SymCubic& sigma);

/// Gauss-type algebraic curvature R_{ijkl} = [sigma_i, sigma_j]_{kl}.
struct AlgCurvature {
  int n = 0;
  /// Dense n^4 array, index ((i*n + j)*n + k)*n + l.
  std::vector<double> rhat;
  /// Ric_{ij} = sum_a R_{iaja}.
  Eigen::MatrixXd ricci;
  double scalar = 0.0;
  /// |W|^2 from the explicit Weyl tensor (0 for n = 2, where it is undefined).
  double weyl_norm_sq = 0.0;
  double traceless_ricci_norm_sq = 0.0;

  /// max |Ric_{ij} + <sigma_i, sigma_j>| and |S + |sigma|^2|.
  double ricci_residual = 0.0;
  /// Antisymmetry and pair-symmetry residual.
  double symmetry_residual = 0.0;
  /// max |R_{ijkl} + R_{iklj} + R_{iljk}|.
  double bianchi_residual = 0.0;

  double operator()(int i, int j, int k, int l) const {
    return rhat[((static_cast<std::size_t>(i) * n + j) * n + k) * n + l];
  }
  double norm_sq() const;
  double ricci_norm_sq() const { return ricci.squaredNorm(); }
};

/// Requires a traceless sigma; throws TraceError otherwise.
AlgCurvature algebraic_curvature(const SymCubic& sigma, double tol_trace = kTolTrace);

struct WeylDecomposition {
  double weyl_norm_sq = 0.0;
  /// | |R|^2 - |W|^2 - 4|Ric|^2/(n-2) + 2 S^2/((n-1)(n-2)) |
  double identity_residual = 0.0;
};

/// Throws DimensionError for n = 2.
WeylDecomposition weyl_decomposition(const AlgCurvature& c);

/// Algebraic right-hand side of the Simons identity for a minimal Legendrian
/// immersion:
///   (n+1) s_ijk + 2 tr(s_i s_j s_k) - (s_i : s_s) s_jks - (j) - (k)
/// Throws TraceError for non-traceless input.
SymCubic simons_rhs(const SymCubic& sigma, double tol_trace = kTolTrace);

/// (n+1)|sigma|^2 - gram - comm.
double simons_gap(const SymCubic& sigma);

}  // namespace legpinch
