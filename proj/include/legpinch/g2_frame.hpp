#pragma once

#include <array>
#include <cstdint>
#include <string>

#include <Eigen/Dense>

namespace legpinch {

/// Structure constants of the cross product on R^7 (0-based storage).
///
/// Convention (1-based): e_i x e_j = e_k for the oriented triples
/// (1,2,3) (1,4,5) (1,7,6) (2,4,6) (2,5,7) (3,4,7) (3,6,5) and their cyclic
/// shifts; reversed order flips the sign.
class OctonionTable {
 public:
  static const OctonionTable& instance();
  /// c_{ijk}, totally antisymmetric, values in {-1, 0, 1}.
  int operator()(int i, int j, int k) const { return c_[i][j][k]; }
  static const std::array<std::array<int, 3>, 7>& triples();

 private:
  OctonionTable();
  std::array<std::array<std::array<int, 7>, 7>, 7> c_{};
};

using Vector7d = Eigen::Matrix<double, 7, 1>;

Vector7d cross(const Vector7d& x, const Vector7d& y);
/// Throws DimensionError unless both inputs have 7 entries.
Eigen::VectorXd cross(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

/// J_p v = p x v. Throws DomainError unless |p| = 1 and <p, v> = 0 within 1e-10.
Vector7d almost_complex(const Vector7d& p, const Vector7d& v);

/// Tangential part of d/dt (gamma x gamma') along the great circle
/// gamma(t) = cos t p + sin t v, by central differences with step h.
/// Vanishes for a nearly Kaehler structure. Requires unit orthogonal p, v.
double nearly_kahler_defect(const Vector7d& p, const Vector7d& v, double t = 0.0, double h = 1e-3);

/// Exact rational with 64-bit parts, always normalized (den > 0, gcd = 1).
/// Arithmetic throws DomainError on overflow or division by zero.
class Rational {
 public:
  Rational(std::int64_t num = 0, std::int64_t den = 1);
  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double to_double() const { return double(num_) / double(den_); }
  std::string str() const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  friend bool operator==(const Rational& a, const Rational& b) = default;

 private:
  std::int64_t num_;
  std::int64_t den_;
};

struct BergerConstants {
  Rational norm_sq;   ///< 25/8
  Rational theta_sq;  ///< 5/4
};

struct AppendixConstants {
  /// 75/56 + (10/7) theta_sq
  Rational threshold(const Rational& theta_sq) const;
  double threshold(double theta_sq) const;
  BergerConstants berger{Rational(25, 8), Rational(5, 4)};
};

AppendixConstants appendix_constants();

}  // namespace legpinch
