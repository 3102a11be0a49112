#include "legpinch/g2_frame.hpp"

#include <cmath>
#include <cstdlib>
#include <numeric>

#include "legpinch/errors.hpp"

namespace legpinch {

const std::array<std::array<int, 3>, 7>& OctonionTable::triples() {
  static const std::array<std::array<int, 3>, 7> t{{
      {1, 2, 3}, {1, 4, 5}, {1, 7, 6}, {2, 4, 6}, {2, 5, 7}, {3, 4, 7}, {3, 6, 5}}};
  return t;
}

OctonionTable::OctonionTable() {
  for (const auto& t : triples()) {
    const int a = t[0] - 1, b = t[1] - 1, c = t[2] - 1;
    c_[a][b][c] = c_[b][c][a] = c_[c][a][b] = 1;
    c_[b][a][c] = c_[c][b][a] = c_[a][c][b] = -1;
  }
}

const OctonionTable& OctonionTable::instance() {
  static const OctonionTable table;
  return table;
}

Vector7d cross(const Vector7d& x, const Vector7d& y) {
  const auto& c = OctonionTable::instance();
  Vector7d z = Vector7d::Zero();
  // Pairing (i, j) with (j, i) makes x × x vanish exactly.
  for (int i = 0; i < 7; ++i)
    for (int j = i + 1; j < 7; ++j) {
      const double w = x(i) * y(j) - x(j) * y(i);
      for (int k = 0; k < 7; ++k)
        if (int s = c(i, j, k)) z(k) += s * w;
    }
  return z;
}

Eigen::VectorXd cross(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  if (x.size() != 7 || y.size() != 7)
    throw DimensionError("cross product needs 7-dimensional inputs, got " + std::to_string(x.size()) + " and " +
                         std::to_string(y.size()));
  return cross(Vector7d(x), Vector7d(y));
}

Vector7d almost_complex(const Vector7d& p, const Vector7d& v) {
  if (std::abs(p.norm() - 1.0) > 1e-10) throw DomainError("base point is not on the unit sphere");
  if (std::abs(p.dot(v)) > 1e-10) throw DomainError("vector is not tangent at the base point");
  return cross(p, v);
}

double nearly_kahler_defect(const Vector7d& p, const Vector7d& v, double t, double h) {
  if (std::abs(p.norm() - 1.0) > 1e-10 || std::abs(v.norm() - 1.0) > 1e-10 || std::abs(p.dot(v)) > 1e-10)
    throw DomainError("great circle needs orthonormal p, v");
  if (!(h > 0.0)) throw DomainError("step must be positive");
  auto jvel = [&](double s) {
    const Vector7d g = std::cos(s) * p + std::sin(s) * v;
    const Vector7d dg = -std::sin(s) * p + std::cos(s) * v;
    return cross(g, dg);
  };
  const Vector7d d = (jvel(t + h) - jvel(t - h)) / (2.0 * h);
  const Vector7d g = std::cos(t) * p + std::sin(t) * v;
  return (d - d.dot(g) * g).norm();
}

namespace {

std::int64_t checked(__int128 v) {
  if (v > INT64_MAX || v < -INT64_MAX) throw DomainError("rational overflow");
  return static_cast<std::int64_t>(v);
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  num_ = num / g;
  den_ = den / g;
}

std::string Rational::str() const {
  return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
}

Rational operator+(const Rational& a, const Rational& b) {
  const __int128 n = __int128(a.num_) * b.den_ + __int128(b.num_) * a.den_;
  const __int128 d = __int128(a.den_) * b.den_;
  // Reduce in 128 bits before narrowing.
  __int128 x = n < 0 ? -n : n, y = d;
  while (y != 0) {
    const __int128 r = x % y;
    x = y;
    y = r;
  }
  if (x == 0) x = 1;
  return Rational(checked(n / x), checked(d / x));
}

Rational operator-(const Rational& a, const Rational& b) { return a + Rational(-b.num_, b.den_); }

Rational operator*(const Rational& a, const Rational& b) {
  const Rational p(a.num_, b.den_), q(b.num_, a.den_);
  return Rational(checked(__int128(p.num_) * q.num_), checked(__int128(p.den_) * q.den_));
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw DomainError("rational division by zero");
  return a * Rational(b.den_, b.num_);
}

Rational AppendixConstants::threshold(const Rational& theta_sq) const {
  return Rational(75, 56) + Rational(10, 7) * theta_sq;
}

double AppendixConstants::threshold(double theta_sq) const { return 75.0 / 56.0 + 10.0 / 7.0 * theta_sq; }

AppendixConstants appendix_constants() { return AppendixConstants{}; }

}  // namespace legpinch
