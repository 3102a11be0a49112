#include "legpinch/sym_cubic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "legpinch/errors.hpp"

namespace legpinch {

namespace {

Index3 sorted(int i, int j, int k) {
  Index3 t{i, j, k};
  std::sort(t.begin(), t.end());
  return t;
}

}  // namespace

SymCubic::SymCubic(int n) : n_(n) {
  if (n < 2) throw DimensionError("SymCubic: dimension must be >= 2, got " + std::to_string(n));
  data_.assign(component_count(n), 0.0);
}

std::size_t SymCubic::component_count(int n) {
  return static_cast<std::size_t>(n) * (n + 1) * (n + 2) / 6;
}

int SymCubic::multiplicity(int i, int j, int k) {
  if (i == j && j == k) return 1;
  if (i == j || j == k || i == k) return 3;
  return 6;
}

SymCubic SymCubic::from_entries(int n, const std::map<Index3, double>& entries) {
  SymCubic s(n);
  std::vector<bool> seen(s.data_.size(), false);
  for (const auto& [key, value] : entries) {
    for (int idx : key) {
      if (idx < 0 || idx >= n)
        throw IndexError("SymCubic: index " + std::to_string(idx) + " out of range for n=" +
                         std::to_string(n));
    }
    const Index3 t = sorted(key[0], key[1], key[2]);
    const std::size_t off = offset(t[0], t[1], t[2]);
    if (seen[off] && s.data_[off] != value)
      throw IndexError("SymCubic: conflicting values for component (" + std::to_string(t[0]) +
                       "," + std::to_string(t[1]) + "," + std::to_string(t[2]) + ")");
    seen[off] = true;
    s.data_[off] = value;
  }
  return s;
}

SymCubic SymCubic::from_dense(int n, std::span<const double> dense) {
  const std::size_t nn = static_cast<std::size_t>(n);
  if (dense.size() != nn * nn * nn)
    throw DimensionError("SymCubic::from_dense: expected n^3 values");
  auto at = [&](int i, int j, int k) { return dense[(i * nn + j) * nn + k]; };
  return generate(n, [&](int i, int j, int k) {
    return (at(i, j, k) + at(i, k, j) + at(j, i, k) + at(j, k, i) + at(k, i, j) + at(k, j, i)) /
           6.0;
  });
}

double SymCubic::operator()(int i, int j, int k) const {
  if (i < 0 || j < 0 || k < 0 || i >= n_ || j >= n_ || k >= n_)
    throw IndexError("SymCubic: index out of range");
  const Index3 t = sorted(i, j, k);
  return data_[offset(t[0], t[1], t[2])];
}

std::vector<double> SymCubic::dense() const {
  const std::size_t nn = static_cast<std::size_t>(n_);
  std::vector<double> out(nn * nn * nn);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k) {
        const Index3 t = sorted(i, j, k);
        out[(i * nn + j) * nn + k] = data_[offset(t[0], t[1], t[2])];
      }
  return out;
}

Eigen::MatrixXd SymCubic::slice(int i) const {
  Eigen::MatrixXd m(n_, n_);
  for (int j = 0; j < n_; ++j)
    for (int k = 0; k < n_; ++k) m(j, k) = (*this)(i, j, k);
  return m;
}

double SymCubic::trace_slice(int i) const {
  double t = 0.0;
  for (int k = 0; k < n_; ++k) t += (*this)(i, k, k);
  return t;
}

std::pair<int, double> SymCubic::max_trace() const {
  int worst = 0;
  double value = 0.0;
  for (int i = 0; i < n_; ++i) {
    const double t = trace_slice(i);
    if (std::abs(t) > std::abs(value)) {
      worst = i;
      value = t;
    }
  }
  return {worst, value};
}

bool SymCubic::is_traceless(double tol) const { return std::abs(max_trace().second) <= tol; }

double SymCubic::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

double SymCubic::norm_sq() const {
  double s = 0.0;
  for (int k = 0; k < n_; ++k)
    for (int j = 0; j <= k; ++j)
      for (int i = 0; i <= j; ++i) {
        const double v = data_[offset(i, j, k)];
        s += multiplicity(i, j, k) * v * v;
      }
  return s;
}

SymCubic SymCubic::operator*(double c) const {
  SymCubic r(*this);
  for (double& v : r.data_) v *= c;
  return r;
}

SymCubic SymCubic::operator+(const SymCubic& o) const {
  if (o.n_ != n_) throw DimensionError("SymCubic: dimension mismatch");
  SymCubic r(*this);
  for (std::size_t i = 0; i < r.data_.size(); ++i) r.data_[i] += o.data_[i];
  return r;
}

SymCubic SymCubic::operator-(const SymCubic& o) const { return *this + o * -1.0; }

double inner(const SymCubic& a, const SymCubic& b) {
  if (a.dim() != b.dim()) throw DimensionError("inner: dimension mismatch");
  const int n = a.dim();
  double s = 0.0;
  for (int k = 0; k < n; ++k)
    for (int j = 0; j <= k; ++j)
      for (int i = 0; i <= j; ++i) {
        const std::size_t off = SymCubic::offset(i, j, k);
        s += SymCubic::multiplicity(i, j, k) * a.components()[off] * b.components()[off];
      }
  return s;
}

double max_abs_diff(const SymCubic& a, const SymCubic& b) {
  if (a.dim() != b.dim()) throw DimensionError("max_abs_diff: dimension mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.components().size(); ++i)
    m = std::max(m, std::abs(a.components()[i] - b.components()[i]));
  return m;
}

SymCubic rotate(const SymCubic& sigma, const Eigen::MatrixXd& q) {
  const int n = sigma.dim();
  if (q.rows() != n || q.cols() != n) throw DimensionError("rotate: basis must be n x n");
  const std::vector<double> d = sigma.dense();
  const std::size_t nn = static_cast<std::size_t>(n);
  // Contract one index at a time: O(n^4).
  std::vector<double> t1(nn * nn * nn, 0.0), t2(nn * nn * nn, 0.0), t3(nn * nn * nn, 0.0);
  for (int c = 0; c < n; ++c)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int k = 0; k < n; ++k) s += q(c, k) * d[(i * nn + j) * nn + k];
        t1[(i * nn + j) * nn + c] = s;
      }
  for (int b = 0; b < n; ++b)
    for (int i = 0; i < n; ++i)
      for (int c = 0; c < n; ++c) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += q(b, j) * t1[(i * nn + j) * nn + c];
        t2[(i * nn + b) * nn + c] = s;
      }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += q(a, i) * t2[(i * nn + b) * nn + c];
        t3[(a * nn + b) * nn + c] = s;
      }
  return SymCubic::from_dense(n, t3);
}

SymCubic project_traceless(const SymCubic& sigma) {
  const int n = sigma.dim();
  std::vector<double> t(n);
  for (int i = 0; i < n; ++i) t[i] = sigma.trace_slice(i);
  const double c = 1.0 / (n + 2);
  return SymCubic::generate(n, [&](int i, int j, int k) {
    const double corr = (j == k ? t[i] : 0.0) + (i == k ? t[j] : 0.0) + (i == j ? t[k] : 0.0);
    return sigma(i, j, k) - c * corr;
  });
}

SymCubic random_sym_cubic(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  return SymCubic::generate(n, [&](int, int, int) { return normal(rng); });
}

SymCubic random_traceless(int n, std::mt19937_64& rng) {
  return project_traceless(random_sym_cubic(n, rng));
}

Eigen::MatrixXd random_orthogonal(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = normal(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j)
    if (r(j, j) < 0) q.col(j) *= -1.0;
  return q;
}

}  // namespace legpinch
