#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace legpinch {

/// Absolute tolerance of the traceless gate.
inline constexpr double kTolTrace = 1e-10;
/// Absolute tolerance for symmetry and curvature identities.
inline constexpr double kTolSym = 1e-10;

using Index3 = std::array<int, 3>;

/// Fully symmetric order-3 tensor on R^n.
///
/// Only the C(n+2,3) distinct components are stored, so symmetry under index
/// permutation is exact. Indices are 0-based throughout the C++ API; the text
/// format (tensor_io.hpp) is 1-based.
class SymCubic {
 public:
  /// Zero tensor. Throws DimensionError for n < 2.
  explicit SymCubic(int n);

  /// Builds a tensor from distinct components keyed by any ordering of
  /// (i, j, k). Missing components default to 0. Throws IndexError on
  /// out-of-range indices and when two keys name the same component with
  /// different values.
  static SymCubic from_entries(int n, const std::map<Index3, double>& entries);

  /// Fills every distinct component (i <= j <= k) from `f(i, j, k)`.
  template <class F>
  static SymCubic generate(int n, F&& f) {
    SymCubic s(n);
    for (int k = 0; k < n; ++k)
      for (int j = 0; j <= k; ++j)
        for (int i = 0; i <= j; ++i) s.data_[offset(i, j, k)] = f(i, j, k);
    return s;
  }

  /// Symmetrizes a dense n^3 array (row-major, index i*n*n + j*n + k).
  static SymCubic from_dense(int n, std::span<const double> dense);

  static std::size_t component_count(int n);
  /// Position of the sorted triple i <= j <= k in the component array.
  static std::size_t offset(int i, int j, int k) {
    return static_cast<std::size_t>(k * (k + 1) * (k + 2) / 6 + j * (j + 1) / 2 + i);
  }
  /// Number of distinct permutations of (i, j, k).
  static int multiplicity(int i, int j, int k);

  int dim() const noexcept { return n_; }
  double operator()(int i, int j, int k) const;
  std::span<const double> components() const noexcept { return data_; }

  /// Dense row-major n^3 copy.
  std::vector<double> dense() const;
  /// The symmetric matrix (sigma_{ijk})_{jk}.
  Eigen::MatrixXd slice(int i) const;
  /// sum_k sigma_{ikk}.
  double trace_slice(int i) const;
  /// Index and value of the slice trace of largest magnitude.
  std::pair<int, double> max_trace() const;
  bool is_traceless(double tol = kTolTrace) const;

  double max_abs() const;
  /// Full sum of squares over all n^3 index triples.
  double norm_sq() const;

  SymCubic operator*(double c) const;
  SymCubic operator+(const SymCubic& o) const;
  SymCubic operator-(const SymCubic& o) const;
  SymCubic operator-() const { return *this * -1.0; }

 private:
  int n_;
  std::vector<double> data_;
};

/// Full contraction sum_{ijk} a_{ijk} b_{ijk}.
double inner(const SymCubic& a, const SymCubic& b);

/// Max |a_{ijk} - b_{ijk}| over distinct components.
double max_abs_diff(const SymCubic& a, const SymCubic& b);

/// Change of basis: result_{abc} = sum Q_{ai} Q_{bj} Q_{ck} sigma_{ijk}.
/// Rows of Q are the new basis vectors expressed in the old coordinates.
SymCubic rotate(const SymCubic& sigma, const Eigen::MatrixXd& q);

/// Orthogonal projection onto traceless cubics: subtracts
/// sym(t (x) I) / (n + 2) where t is the slice-trace vector.
SymCubic project_traceless(const SymCubic& sigma);

/// Distinct components drawn i.i.d. standard normal.
SymCubic random_sym_cubic(int n, std::mt19937_64& rng);

/// random_sym_cubic followed by project_traceless.
SymCubic random_traceless(int n, std::mt19937_64& rng);

/// Haar-distributed orthogonal matrix (QR of a Gaussian matrix, sign-fixed).
Eigen::MatrixXd random_orthogonal(int n, std::mt19937_64& rng);

}  // namespace legpinch
