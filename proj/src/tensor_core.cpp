#include "legpinch/tensor_core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "legpinch/errors.hpp"

namespace legpinch {

namespace {

void require_traceless(const SymCubic& sigma, double tol, const char* who) {
  const auto [slice, trace] = sigma.max_trace();
  if (std::abs(trace) > tol) {
    std::ostringstream os;
    os << who << ": sigma is not traceless (slice " << slice + 1 << " has trace " << trace
       << ")";
    throw TraceError(os.str(), slice, trace);
  }
}

std::vector<Eigen::MatrixXd> slices(const SymCubic& sigma) {
  std::vector<Eigen::MatrixXd> out;
  out.reserve(sigma.dim());
  for (int i = 0; i < sigma.dim(); ++i) out.push_back(sigma.slice(i));
  return out;
}

Eigen::MatrixXd gram_matrix(const std::vector<Eigen::MatrixXd>& s) {
  const int n = static_cast<int>(s.size());
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = s[i].cwiseProduct(s[j]).sum();
  return g;
}

}  // namespace

Invariants invariants(const SymCubic& sigma) {
  const auto s = slices(sigma);
  const int n = sigma.dim();
  Invariants inv;
  inv.norm_sq = sigma.norm_sq();
  const Eigen::MatrixXd g = gram_matrix(s);
  inv.gram = g.squaredNorm();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv.comm += (s[i] * s[j] - s[j] * s[i]).squaredNorm();
  return inv;
}

double AlgCurvature::norm_sq() const {
  double s = 0.0;
  for (double v : rhat) s += v * v;
  return s;
}

AlgCurvature algebraic_curvature(const SymCubic& sigma, double tol_trace) {
  require_traceless(sigma, tol_trace, "algebraic_curvature");
  const int n = sigma.dim();
  const auto s = slices(sigma);
  const std::size_t nn = static_cast<std::size_t>(n);

  AlgCurvature c;
  c.n = n;
  c.rhat.assign(nn * nn * nn * nn, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Eigen::MatrixXd br = s[i] * s[j] - s[j] * s[i];
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) c.rhat[((i * nn + j) * nn + k) * nn + l] = br(k, l);
    }

  c.ricci = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int a = 0; a < n; ++a) c.ricci(i, j) += c(i, a, j, a);
  c.scalar = c.ricci.trace();

  const Eigen::MatrixXd g = gram_matrix(s);
  c.ricci_residual = std::max((c.ricci + g).cwiseAbs().maxCoeff(),
                              std::abs(c.scalar + sigma.norm_sq()));

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const double r = c(i, j, k, l);
          c.symmetry_residual = std::max({c.symmetry_residual, std::abs(r + c(j, i, k, l)),
                                          std::abs(r + c(i, j, l, k)), std::abs(r - c(k, l, i, j))});
          c.bianchi_residual =
              std::max(c.bianchi_residual, std::abs(r + c(i, k, l, j) + c(i, l, j, k)));
        }

  const Eigen::MatrixXd ric0 = c.ricci - (c.scalar / n) * Eigen::MatrixXd::Identity(n, n);
  c.traceless_ricci_norm_sq = ric0.squaredNorm();
  if (n >= 3) c.weyl_norm_sq = weyl_decomposition(c).weyl_norm_sq;
  return c;
}

WeylDecomposition weyl_decomposition(const AlgCurvature& c) {
  const int n = c.n;
  if (n < 3) throw DimensionError("weyl_decomposition: requires n >= 3");
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd ric0 = c.ricci - (c.scalar / n) * id;
  // Kulkarni-Nomizu product (h o g)_{ijkl} = h_ik g_jl + h_jl g_ik - h_il g_jk - h_jk g_il.
  auto kn = [](const Eigen::MatrixXd& h, const Eigen::MatrixXd& g, int i, int j, int k, int l) {
    return h(i, k) * g(j, l) + h(j, l) * g(i, k) - h(i, l) * g(j, k) - h(j, k) * g(i, l);
  };
  const double a = 1.0 / (n - 2);
  const double b = c.scalar / (2.0 * n * (n - 1));
  double w2 = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const double w = c(i, j, k, l) - a * kn(ric0, id, i, j, k, l) - b * kn(id, id, i, j, k, l);
          w2 += w * w;
        }
  WeylDecomposition d;
  d.weyl_norm_sq = w2;
  d.identity_residual = std::abs(c.norm_sq() - w2 - 4.0 * c.ricci_norm_sq() / (n - 2) +
                                 2.0 * c.scalar * c.scalar / ((n - 1.0) * (n - 2.0)));
  return d;
}

SymCubic simons_rhs(const SymCubic& sigma, double tol_trace) {
  require_traceless(sigma, tol_trace, "simons_rhs");
  const int n = sigma.dim();
  const auto s = slices(sigma);
  const Eigen::MatrixXd g = gram_matrix(s);  // g(i,s) = sum_{t,l} s_tli s_tls
  // Only distinct components are evaluated; the cubic trace term tr(s_i s_j s_k)
  // is symmetric in (i, j, k) because every slice is symmetric.
  return SymCubic::generate(n, [&](int i, int j, int k) {
    double v = (n + 1) * sigma(i, j, k) + 2.0 * (s[i] * s[j]).cwiseProduct(s[k].transpose()).sum();
    for (int t = 0; t < n; ++t)
      v -= g(i, t) * sigma(j, k, t) + g(j, t) * sigma(i, k, t) + g(k, t) * sigma(i, j, t);
    return v;
  });
}

double simons_gap(const SymCubic& sigma) {
  const Invariants inv = invariants(sigma);
  return (sigma.dim() + 1) * inv.norm_sq - inv.gram - inv.comm;
}

}  // namespace legpinch
