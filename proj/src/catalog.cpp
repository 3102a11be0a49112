#include "legpinch/catalog.hpp"

#include <cmath>
#include <numbers>

#include "legpinch/errors.hpp"

namespace legpinch {

namespace {

using Eigen::VectorXd;

constexpr double kPi = std::numbers::pi;

// Unit vector in R^(m+1) from m polar angles; the last angle is azimuthal.
VectorXd polar(const double* th, int m) {
  VectorXd p(m + 1);
  double s = 1.0;
  for (int k = 0; k < m; ++k) {
    p(k) = s * std::cos(th[k]);
    s *= std::sin(th[k]);
  }
  p(m) = s;
  return p;
}

// Chart box for m polar angles starting at position `first` of lo/hi.
void polar_box(int m, int first, VectorXd& lo, VectorXd& hi, std::vector<bool>& periodic) {
  for (int k = 0; k < m; ++k) {
    const int a = first + k;
    if (k == m - 1) {
      lo(a) = 0.0;
      hi(a) = 2.0 * kPi;
      periodic[a] = true;
    } else {
      lo(a) = kPoleMargin;
      hi(a) = kPi - kPoleMargin;
      periodic[a] = false;
    }
  }
}

}  // namespace

CatalogEntry calabi_torus(int n) {
  if (n < 2) throw DimensionError("Calabi torus needs n >= 2, got " + std::to_string(n));
  const double sn = std::sqrt(double(n));
  const double r1 = std::sqrt(n / (n + 1.0));
  const double r2 = std::sqrt(1.0 / (n + 1.0));

  CatalogEntry e;
  e.name = "calabi" + std::to_string(n);
  Immersion& im = e.immersion;
  im.name = e.name;
  im.n = n;
  im.ambient_n = n;
  im.eval = [n, sn, r1, r2](const VectorXd& u) {
    const double t = u(0);
    const VectorXd phi = polar(u.data() + 1, n - 1);
    VectorXd f(2 * n + 2);
    const double c1 = r1 * std::cos(t / sn), s1 = r1 * std::sin(t / sn);
    for (int k = 0; k < n; ++k) {
      f(2 * k) = c1 * phi(k);
      f(2 * k + 1) = s1 * phi(k);
    }
    f(2 * n) = r2 * std::cos(sn * t);
    f(2 * n + 1) = -r2 * std::sin(sn * t);
    return f;
  };
  im.lo = VectorXd::Zero(n);
  im.hi = VectorXd::Zero(n);
  im.periodic.assign(n, false);
  im.hi(0) = 2.0 * kPi * sn;
  im.periodic[0] = true;
  polar_box(n - 1, 1, im.lo, im.hi, im.periodic);

  const double top = (n - 1) / sn;
  e.closed_form_sigma = SymCubic::generate(n, [&](int i, int j, int k) {
    if (i == 0 && j == 0 && k == 0) return top;
    if (i == 0 && j == k) return -1.0 / sn;
    return 0.0;
  });
  e.expected.norm_sq = (n - 1.0) * (n + 2.0) / n;
  e.expected.theta = top;
  e.expected.mu.assign(n, -1.0 / sn);
  e.expected.mu[0] = top;
  e.expected.minimal = true;
  e.expected.legendrian = true;
  e.witness = (im.lo + im.hi) / 2.0;
  return e;
}

CatalogEntry totally_geodesic(int n) {
  if (n < 1) throw DimensionError("sphere dimension must be >= 1, got " + std::to_string(n));
  CatalogEntry e;
  e.name = "geodesic" + std::to_string(n);
  Immersion& im = e.immersion;
  im.name = e.name;
  im.n = n;
  im.ambient_n = n;
  im.eval = [n](const VectorXd& u) {
    const VectorXd p = polar(u.data(), n);
    VectorXd f = VectorXd::Zero(2 * n + 2);
    for (int k = 0; k <= n; ++k) f(2 * k) = p(k);
    return f;
  };
  im.lo = VectorXd::Zero(n);
  im.hi = VectorXd::Zero(n);
  im.periodic.assign(n, false);
  polar_box(n, 0, im.lo, im.hi, im.periodic);

  if (n >= 2) e.closed_form_sigma = SymCubic(n);
  e.expected.norm_sq = 0.0;
  e.expected.theta = 0.0;
  e.expected.mu.assign(n, 0.0);
  e.expected.minimal = true;
  e.expected.legendrian = true;
  e.witness = (im.lo + im.hi) / 2.0;
  return e;
}

CatalogEntry control_non_legendrian() {
  CatalogEntry e;
  e.name = "control";
  Immersion& im = e.immersion;
  im.name = e.name;
  im.n = 2;
  im.ambient_n = 2;
  im.eval = [](const VectorXd& u) {
    const double r = 1.0 / std::sqrt(3.0);
    const double a = u(0), b = u(1);
    VectorXd f(6);
    f << r * std::cos(a), r * std::sin(a), r * std::cos(b), r * std::sin(b), r * std::cos(a + b),
        r * std::sin(a + b);
    return f;
  };
  im.lo = VectorXd::Zero(2);
  im.hi = VectorXd::Constant(2, 2.0 * kPi);
  im.periodic.assign(2, true);
  e.expected.legendrian = false;
  e.witness = VectorXd::Zero(2);
  return e;
}

CatalogEntry catalog_entry(const std::string& name) {
  if (name == "control") return control_non_legendrian();
  auto suffix = [&](const std::string& prefix) -> int {
    if (name.rfind(prefix, 0) != 0 || name.size() == prefix.size()) return -1;
    int v = 0;
    for (std::size_t k = prefix.size(); k < name.size(); ++k) {
      if (name[k] < '0' || name[k] > '9' || v > 1000) return -1;
      v = v * 10 + (name[k] - '0');
    }
    return v;
  };
  if (int n = suffix("calabi"); n >= 0) return calabi_torus(n);
  if (int n = suffix("geodesic"); n >= 0) return totally_geodesic(n);
  throw DomainError("unknown catalog entry '" + name + "'");
}

std::vector<std::string> catalog_names() {
  std::vector<std::string> names;
  for (int n = 2; n <= 8; ++n) names.push_back("calabi" + std::to_string(n));
  for (int n = 1; n <= 8; ++n) names.push_back("geodesic" + std::to_string(n));
  names.push_back("control");
  return names;
}

}  // namespace legpinch
