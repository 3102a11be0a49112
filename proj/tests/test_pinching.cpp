#include <cmath>

#include "doctest.h"
#include "legpinch/catalog.hpp"
#include "legpinch/errors.hpp"
#include "legpinch/pinching.hpp"
#include "legpinch/tensor_core.hpp"
#include "oracles.hpp"

using namespace legpinch;

TEST_CASE("kappa gap equals the inequality written in norm, gram and theta") {
  std::mt19937_64 rng(101);
  for (int rep = 0; rep < 200; ++rep) {
    const SymCubic s = random_traceless(3, rng);
    const Canonical3 c = canonical3(s);
    const oracle::Invariants inv = oracle::invariants(s);
    const double n2 = inv.norm_sq, t2 = c.theta * c.theta;
    for (double k : {1.4, 1.5, 2.0, 5.0}) {
      const double rhs = 2 * k / 5 * (n2 - (5 * k - 3) / (2 * k) * t2) * n2;
      const double lhs = inv.gram - n2 * n2 / 5;
      const double gap = kappa_inequality_gap(c, k);
      CHECK(gap == doctest::Approx(rhs - lhs).epsilon(1e-9).scale(n2 * n2));
      CHECK(gap >= -1e-9);
    }
  }
  CHECK_THROWS_AS(kappa_inequality_gap(canonical3(random_traceless(3, rng)), 1.39), DomainError);
}

TEST_CASE("kappa gap vanishes when y = z = 0") {
  for (double l : {0.1, 0.7, 2.0}) {
    const Canonical3 c = canonical3(canonical3_tensor(l, l, 0, 0));
    for (double k : {1.4, 1.5, 2.0, 5.0}) CHECK(std::abs(kappa_inequality_gap(c, k)) <= 1e-9);
  }
}

TEST_CASE("Laplacian lower bound") {
  const Canonical3 cal = canonical3(*calabi_torus(3).closed_form_sigma);
  const LaplacianBound b = laplacian_lower_bound(cal, Ambient::sphere4);
  CHECK(b.threshold == doctest::Approx(10.0 / 3.0).epsilon(1e-12));
  CHECK(std::abs(b.bound) <= 1e-12);
  CHECK(b.holds);
  std::mt19937_64 rng(103);
  for (int rep = 0; rep < 100; ++rep) {
    const Canonical3 c = canonical3(random_traceless(3, rng));
    for (Ambient a : {Ambient::sphere4, Ambient::nearly_kahler_15_4}) {
      const double cst = a == Ambient::sphere4 ? 4.0 : 15.0 / 4.0;
      const double t2 = c.theta * c.theta;
      const double thr = a == Ambient::sphere4 ? 10.0 / 7.0 * (1 + t2) : 75.0 / 56.0 + 10.0 / 7.0 * t2;
      const LaplacianBound r = laplacian_lower_bound(c, a);
      CHECK(r.threshold == doctest::Approx(thr).epsilon(1e-12));
      CHECK(r.bound == doctest::Approx(14.0 / 5.0 * (thr - c.norm_sq) * c.norm_sq).epsilon(1e-10));
      CHECK(r.algebraic ==
            doctest::Approx(cst * c.norm_sq - 5 * c.gram + c.norm_sq * c.norm_sq).epsilon(1e-10));
      CHECK(r.holds);
    }
  }
}

TEST_CASE("Newton gap against subset enumeration") {
  std::mt19937_64 rng(107);
  std::exponential_distribution<double> expo;
  for (int m = 2; m <= 9; ++m)
    for (int rep = 0; rep < 20; ++rep) {
      std::vector<double> a(m);
      for (double& v : a) v = expo(rng);
      const double n = m + 1;
      const double e1 = oracle::elementary(a, 1), e2 = oracle::elementary(a, 2), e3 = oracle::elementary(a, 3);
      const double want = 2 * (n - 3) / (3 * (n - 2)) * e2 * e2 / e1 - e3;
      const double got = newton_gap(a);
      CHECK(got == doctest::Approx(want).epsilon(1e-10).scale(std::max(1.0, e3)));
      CHECK(got >= -1e-12 * std::max(1.0, e3));
    }
}

TEST_CASE("Newton gap is zero at equal tuples") {
  for (int m = 2; m <= 12; ++m)
    for (double v : {1.0, 2.0, 5.0}) CHECK(newton_gap(std::vector<double>(m, v)) == 0.0);
  for (int m = 2; m <= 12; ++m) {
    const double g = newton_gap(std::vector<double>(m, 0.3));
    CHECK(std::abs(g) <= 1e-14);
  }
  CHECK_THROWS_AS(newton_gap(std::vector<double>{1.0}), DomainError);
  CHECK_THROWS_AS(newton_gap(std::vector<double>{0.0, 0.0, 0.0}), DomainError);
}

TEST_CASE("beta chain") {
  for (int n = 3; n <= 8; ++n) {
    std::vector<double> mu(n, -1 / std::sqrt(double(n)));
    mu[0] = (n - 1) / std::sqrt(double(n));
    const BetaChain b = beta_chain_check(mu, n);
    CHECK(std::abs(b.beta - (n + 2) / std::sqrt(double(n)) * mu[0]) <= 1e-12);
    CHECK(std::abs(b.stationarity) <= 1e-12);
    CHECK(b.passes);
    CHECK(b.bound_ratio == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(beta_chain_check(std::vector<double>{1, -1}, 3), DomainError);
  CHECK_THROWS_AS(beta_chain_check(std::vector<double>{1, 1, -1}, 3), DomainError);
  CHECK_THROWS_AS(beta_chain_check(std::vector<double>{-1, 2, -1}, 3), DomainError);
  CHECK_THROWS_AS(beta_chain_check(std::vector<double>{0, 0, 0}, 3), DomainError);
}

TEST_CASE("beta chain on admissible random vectors") {
  std::mt19937_64 rng(109);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> top(0.0, 4.0);
  int accepted = 0;
  for (int draw = 0; draw < 20000; ++draw) {
    const int n = 3 + draw % 6;
    std::vector<double> mu(n);
    double sum = 0;
    for (double& v : mu) sum += (v = normal(rng));
    for (double& v : mu) v -= sum / n;
    std::swap(mu[0], *std::max_element(mu.begin(), mu.end()));
    const double scale = top(rng) / mu[0];
    for (double& v : mu) v *= scale;
    if (mu[0] < 2 * *std::max_element(mu.begin() + 1, mu.end())) continue;
    const BetaChain b = beta_chain_check(mu, n);
    if (b.stationarity > 0) continue;
    ++accepted;
    CHECK(b.beta >= (n + 2) / std::sqrt(double(n)) * mu[0] - 1e-9);
    CHECK(b.passes);
  }
  CHECK(accepted > 1000);
}

TEST_CASE("pinching report on closed-form tensors") {
  for (int n = 2; n <= 6; ++n) {
    const PinchReport r = pinching_report(*calabi_torus(n).closed_form_sigma);
    CHECK(r.n == n);
    CHECK(std::abs(r.gap_main) <= 1e-12);
    CHECK(r.beta == doctest::Approx(r.norm_sq).epsilon(1e-12));
    CHECK(std::abs(r.simons_gap) <= 1e-12);
    CHECK(r.violations.empty());
    CHECK(r.gap_thm2.has_value() == (n == 3));
    if (n == 3) {
      CHECK(std::abs(*r.gap_thm2) <= 1e-12);
      CHECK(std::abs(*r.gap_n3_quadratic) <= 1e-12);
      CHECK(*r.gap_appendix == doctest::Approx(75.0 / 56 + 40.0 / 21 - 10.0 / 3));
    }
  }
  const PinchReport z = pinching_report(SymCubic(3));
  CHECK(z.theta == 0.0);
  CHECK(z.gap_main == 0.0);
  CHECK(z.flags.main);
  CHECK(z.violations.empty());
  CHECK_THROWS_AS(pinching_report(SymCubic::from_entries(3, {{{0, 0, 0}, 1.0}})), TraceError);
}

TEST_CASE("pinching report invariants on random tensors") {
  std::mt19937_64 rng(113);
  for (int n = 2; n <= 5; ++n)
    for (int rep = 0; rep < 10; ++rep) {
      const SymCubic s = random_traceless(n, rng);
      const PinchReport r = pinching_report(s);
      CHECK(r.violations.empty());
      CHECK(r.beta <= r.norm_sq + 1e-9 * r.norm_sq);
      if (n == 2) CHECK(r.norm_sq == doctest::Approx(4 * r.theta * r.theta).epsilon(1e-10));
    }
}
