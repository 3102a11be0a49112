#include "legpinch/pinching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "legpinch/errors.hpp"
#include "legpinch/tensor_core.hpp"

namespace legpinch {

double kappa_inequality_gap(const Canonical3& c, double kappa) {
  if (!(kappa >= 1.4)) {
    std::ostringstream os;
    os << "kappa_inequality_gap: kappa must be >= 7/5, got " << kappa;
    throw DomainError(os.str());
  }
  const double x = c.x, y = c.y, z = c.z;
  const double lhs = 1.5 * x * x + 0.3 * y * y + 0.3 * z * z + 3.0 * x * y + 0.9 * y * z;
  const double norm = 2.5 * x + 1.5 * y + z;
  const double rhs = (2.0 * kappa / 5.0) * (norm - (5.0 * kappa - 3.0) / (2.0 * kappa) * x) * norm;
  return rhs - lhs;
}

LaplacianBound laplacian_lower_bound(const Canonical3& c, Ambient ambient) {
  const double theta_sq = c.theta * c.theta;
  const double norm = c.norm_sq;
  LaplacianBound b;
  double constant = 4.0;
  switch (ambient) {
    case Ambient::sphere4:
      b.threshold = (10.0 / 7.0) * (1.0 + theta_sq);
      constant = 4.0;
      break;
    case Ambient::nearly_kahler_15_4:
      b.threshold = 75.0 / 56.0 + (10.0 / 7.0) * theta_sq;
      constant = 15.0 / 4.0;
      break;
  }
  b.bound = 2.8 * (b.threshold - norm) * norm;
  // comm = 4 gram - |sigma|^4 in dimension 3.
  b.algebraic = constant * norm - 5.0 * c.gram + norm * norm;
  b.slack = b.algebraic - b.bound;
  b.holds = b.slack >= -1e-9;
  return b;
}

double newton_gap(std::span<const double> a) {
  const std::size_t m = a.size();
  if (m < 2) throw DomainError("newton_gap: needs at least two values");
  // Elementary symmetric polynomials by the usual one-pass recurrence.
  double e1 = 0.0, e2 = 0.0, e3 = 0.0;
  for (double v : a) {
    e3 += v * e2;
    e2 += v * e1;
    e1 += v;
  }
  if (!(e1 > 0.0)) throw DomainError("newton_gap: sum must be positive");
  // With n = m + 1 the coefficient is 2(m-2) / (3(m-1)). One rounding in the
  // final division keeps equal integer tuples exact.
  const double md = static_cast<double>(m);
  const double rhs = (2.0 * (md - 2.0) * e2 * e2) / (3.0 * (md - 1.0) * e1);
  return rhs - e3;
}

BetaChain beta_chain_check(std::span<const double> mu, int n) {
  if (n < 2 || static_cast<int>(mu.size()) != n)
    throw DomainError("beta_chain_check: mu must have n >= 2 entries");
  double sum = 0.0;
  for (double v : mu) sum += v;
  if (std::abs(sum) > 1e-10) throw DomainError("beta_chain_check: mu must sum to zero");
  const double m1 = mu[0];
  if (*std::max_element(mu.begin(), mu.end()) > m1)
    throw DomainError("beta_chain_check: mu(0) must be the maximum");
  if (!(m1 > 0.0)) throw DomainError("beta_chain_check: mu(0) must be positive");

  double sq = 0.0, cube = 0.0, mu2 = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 1; j < mu.size(); ++j) {
    sq += mu[j] * mu[j];
    cube += mu[j] * mu[j] * mu[j];
    mu2 = std::max(mu2, mu[j]);
  }
  BetaChain r;
  r.beta = m1 * m1 + 3.0 * sq;
  r.stationarity = (n + 1) * m1 - m1 * m1 * m1 + 2.0 * cube - 3.0 * m1 * sq;
  const double target = (n + 2) / std::sqrt(static_cast<double>(n)) * m1;
  r.bound_ratio = r.beta / target;
  const bool admissible = r.stationarity <= 0.0 && m1 >= 2.0 * mu2;
  const bool chain = !admissible || r.beta >= target - 1e-9;
  const bool cauchy_schwarz = r.beta >= (n + 2.0) / (n - 1.0) * m1 * m1 - 1e-9;
  r.passes = chain && cauchy_schwarz;
  return r;
}

PinchReport pinching_report(const SymCubic& sigma, const PinchOptions& opts) {
  const auto [slice, trace] = sigma.max_trace();
  if (std::abs(trace) > opts.tol_trace) {
    std::ostringstream os;
    os << "pinching_report: sigma is not traceless (slice " << slice + 1 << " has trace " << trace
       << ")";
    throw TraceError(os.str(), slice, trace);
  }
  const int n = sigma.dim();
  const AdaptedSpectrum spec = theta(sigma, opts.theta);
  const Invariants inv = invariants(sigma);

  PinchReport r;
  r.n = n;
  r.norm_sq = inv.norm_sq;
  r.theta = spec.theta;
  r.mu.assign(spec.mu.begin(), spec.mu.end());
  r.lagrange_residual = spec.lagrange_residual;
  r.multiplicity_one = spec.multiplicity_one;
  double tail = 0.0;
  for (int j = 1; j < n; ++j) tail += spec.mu(j) * spec.mu(j);
  r.beta = spec.theta * spec.theta + 3.0 * tail;
  r.simons_gap = (n + 1) * inv.norm_sq - inv.gram - inv.comm;

  const double t = spec.theta, t2 = t * t, b2 = inv.norm_sq;
  r.gap_main = (n + 2) / std::sqrt(static_cast<double>(n)) * t - b2;
  r.flags.main = r.gap_main >= 0.0;
  if (n == 3) {
    r.gap_n3_quadratic = 2.0 + t2 - b2;
    r.gap_thm2 = (10.0 / 7.0) * (1.0 + t2) - b2;
    r.gap_appendix = 75.0 / 56.0 + (10.0 / 7.0) * t2 - b2;
    r.flags.n3_quadratic = *r.gap_n3_quadratic >= 0.0;
    r.flags.thm2 = *r.gap_thm2 >= 0.0;
    r.flags.appendix = *r.gap_appendix >= 0.0;
  }

  auto fail = [&](const std::string& what, double value) {
    std::ostringstream os;
    os << what << " (" << value << ")";
    r.violations.push_back(os.str());
  };
  const double scale = std::max(1.0, b2);
  if (r.beta > b2 + 1e-9 * scale) fail("beta exceeds |B|^2", r.beta - b2);
  if (r.beta < (n + 2.0) / (n - 1.0) * t2 - 1e-9 * scale)
    fail("beta below (n+2)/(n-1) theta^2", r.beta - (n + 2.0) / (n - 1.0) * t2);
  if (spec.lagrange_residual > opts.theta.tol) fail("Lagrange residual", spec.lagrange_residual);
  if (n >= 2 && spec.mu(0) < 2.0 * spec.mu(1) - kTolLagrange * std::max(1.0, t))
    fail("mu1 < 2 mu2 at the maximizer", spec.mu(0) - 2.0 * spec.mu(1));
  if (n == 2 && std::abs(b2 - 4.0 * t2) > 1e-8 * scale) fail("n = 2: |B|^2 != 4 theta^2", b2 - 4.0 * t2);
  if (n == 3 && r.gap_main >= 0.0 && *r.gap_n3_quadratic < -1e-9 * scale)
    fail("n = 3: main condition holds but 2 + theta^2 condition fails", *r.gap_n3_quadratic);
  return r;
}

}  // namespace legpinch
