#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "legpinch/pinching.hpp"
#include "legpinch/sym_cubic.hpp"

namespace legpinch {

inline constexpr double kTolFd = 1e-6;
inline constexpr double kTolCodazzi = 1e-3;
inline constexpr double kTolGauss = 1e-3;
inline constexpr double kDefaultStep = 1e-4;
/// Default step for the nested stencils of the Codazzi and Gauss checks.
inline constexpr double kDefaultCurvatureStep = 1e-3;

/// Parametrized immersion u in R^n -> S^(2m+1) in C^(m+1) = R^(2m+2).
/// Complex coordinate k occupies real slots (2k, 2k+1).
struct Immersion {
  std::string name;
  int n = 0;
  int ambient_n = 0;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> eval;
  /// Chart box. For non-periodic axes the box already excludes the pole margin.
  Eigen::VectorXd lo, hi;
  std::vector<bool> periodic;

  int real_dim() const { return 2 * ambient_n + 2; }
  Eigen::VectorXd operator()(const Eigen::VectorXd& u) const { return eval(u); }
};

/// The same immersion in a reparametrized chart: each coordinate becomes
///   u + eps L / (2 pi) sin(2 pi (u - lo) / L)
/// with L the period (periodic axes) or twice the box width, so the box and
/// its periodicity are preserved. Requires 0 <= eps < 1; throws DomainError
/// otherwise. Single-frequency charts make central differences exact up to a
/// constant factor, which hides truncation error; a warped chart does not.
Immersion warp_chart(const Immersion& imm, double eps);

/// Standard complex structure: (x, y) -> (-y, x) on each complex coordinate.
Eigen::VectorXd apply_j(const Eigen::VectorXd& v);

struct JetOptions {
  double h = kDefaultStep;
  /// Combine steps h and h/2 to cancel the h^2 term.
  bool richardson = false;
};

/// Second-order local data of an immersion at one parameter point.
struct ImmersionJet {
  Eigen::VectorXd u;
  Eigen::VectorXd F;
  /// Columns are the coordinate partials.
  Eigen::MatrixXd dF;
  /// d2F[a * n + b]
  std::vector<Eigen::VectorXd> d2F;
  Eigen::MatrixXd g;
  /// Gram-Schmidt frame in coordinate order; columns are ambient vectors.
  Eigen::MatrixXd frame;
  /// e_i = sum_a coeffs(i, a) dF_a
  Eigen::MatrixXd frame_coeffs;
  /// gamma[(k * n + i) * n + j] = Gamma^k_ij, from differences of g.
  std::vector<double> gamma;
  /// B(e_i, e_j) at index i * n + j, in the orthonormal frame.
  std::vector<Eigen::VectorXd> B;
  Eigen::VectorXd H;

  int dim() const { return static_cast<int>(dF.cols()); }
  const Eigen::VectorXd& b(int i, int j) const { return B[static_cast<std::size_t>(i) * dim() + j]; }
  double christoffel(int k, int i, int j) const {
    const std::size_t n = static_cast<std::size_t>(dim());
    return gamma[(k * n + i) * n + j];
  }
  double b_norm_sq() const;
  /// max |<B(e_i,e_j), e_k>|, |<B(e_i,e_j), F>| and |B(e_i,e_j) - B(e_j,e_i)|.
  double normality_residual() const;
};

/// Central differences of order h^2. Throws DegenerateChartError when the
/// induced metric is singular.
ImmersionJet jet(const Immersion& imm, const Eigen::VectorXd& u, const JetOptions& opts = {});

/// max over i, j of |<JF, dF_i>| and |<J dF_i, dF_j>|.
double legendrian_residual(const ImmersionJet& j);

struct SigmaAt {
  SymCubic sigma;
  /// max deviation of <B(e_i,e_j), J e_k> from its symmetrization.
  double symmetry_residual = 0.0;
};

/// sigma_ijk = <B(e_i,e_j), J e_k>, symmetrized. Throws LegendrianViolation
/// when legendrian_residual(j) > 1e-6.
SigmaAt sigma_at(const ImmersionJet& j);

struct CodazziResult {
  /// max |sigma_{ijk,l} - sym(sigma_{..,.})_{ijkl}| in the orthonormal frame.
  double residual = 0.0;
  /// max |sigma_{ijk,l}|
  double max_abs_derivative = 0.0;
};

/// Covariant derivative of the cubic form by differences of its coordinate
/// components with Christoffel corrections; every stencil uses step h.
CodazziResult codazzi_residual(const Immersion& imm, const Eigen::VectorXd& u,
                               double h = kDefaultCurvatureStep);

/// Max componentwise deviation of the intrinsic curvature (differences of
/// Christoffel symbols) from the Gauss equation
///   R_ijkl = d_ik d_jl - d_il d_jk + sum_m s_ikm s_jlm - s_ilm s_jkm.
double gauss_residual(const Immersion& imm, const Eigen::VectorXd& u,
                      double h = kDefaultCurvatureStep);

struct GridSpec {
  /// Points per parameter axis.
  std::vector<int> resolution;
};

struct ScanOptions {
  JetOptions jet;
  /// Slice-trace gate applied to the finite-difference cubic form before it
  /// is projected to its traceless part.
  double tol_trace = 1e-6;
  PinchOptions pinch;
  /// 0: LEGPINCH_THREADS, else hardware concurrency.
  int threads = 0;
};

struct ScanRecord {
  std::size_t index = 0;
  Eigen::VectorXd u;
  double legendrian_residual = 0.0;
  double mean_curvature = 0.0;
  double symmetry_residual = 0.0;
  std::optional<PinchReport> report;
  /// Non-empty when the point failed; the scan continues.
  std::string error;
};

/// Grid coordinates in row-major order (last axis fastest). Periodic axes use
/// lo + i (hi - lo) / N, others cell centres.
std::vector<Eigen::VectorXd> grid_points(const Immersion& imm, const GridSpec& grid);

/// One record per grid point, in grid order regardless of thread schedule.
std::vector<ScanRecord> field_scan(const Immersion& imm, const GridSpec& grid,
                                   const ScanOptions& opts = {});

/// Thread count from LEGPINCH_THREADS or the hardware.
int default_thread_count();

}  // namespace legpinch
