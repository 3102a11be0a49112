#include <cmath>

#include "doctest.h"
#include "legpinch/catalog.hpp"
#include "legpinch/errors.hpp"
#include "legpinch/tensor_core.hpp"
#include "oracles.hpp"

using namespace legpinch;

TEST_CASE("invariants against full index sums") {
  std::mt19937_64 rng(17);
  for (int n = 2; n <= 6; ++n)
    for (int rep = 0; rep < 5; ++rep) {
      const SymCubic s = random_sym_cubic(n, rng);
      const Invariants a = invariants(s);
      const oracle::Invariants b = oracle::invariants(s);
      CHECK(a.norm_sq == doctest::Approx(b.norm_sq).epsilon(1e-12));
      CHECK(a.gram == doctest::Approx(b.gram).epsilon(1e-12));
      CHECK(a.comm == doctest::Approx(b.comm).epsilon(1e-12));
    }
}

TEST_CASE("Calabi n=3 invariants") {
  const SymCubic s = *calabi_torus(3).closed_form_sigma;
  const Invariants inv = invariants(s);
  CHECK(inv.norm_sq == doctest::Approx(10.0 / 3.0).epsilon(1e-14));
  CHECK(inv.gram == doctest::Approx(44.0 / 9.0).epsilon(1e-14));
  CHECK(inv.comm == doctest::Approx(76.0 / 9.0).epsilon(1e-14));
}

TEST_CASE("algebraic curvature structure") {
  std::mt19937_64 rng(19);
  for (int n = 2; n <= 6; ++n) {
    const SymCubic s = random_traceless(n, rng);
    const AlgCurvature c = algebraic_curvature(s);
    const double scale = s.norm_sq();
    CHECK(c.symmetry_residual <= 1e-12 * scale);
    CHECK(c.bianchi_residual <= 1e-12 * scale);
    CHECK(c.ricci_residual <= 1e-12 * scale);
    CHECK(c.norm_sq() == doctest::Approx(invariants(s).comm).epsilon(1e-12));
    CHECK(c.scalar == doctest::Approx(-s.norm_sq()).epsilon(1e-12));
    // R_ijkl = [s_i, s_j]_kl, checked entrywise by direct summation
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            double v = 0;
            for (int m = 0; m < n; ++m) v += s(i, k, m) * s(j, m, l) - s(j, k, m) * s(i, m, l);
            CHECK(c(i, j, k, l) == doctest::Approx(v).epsilon(1e-12).scale(1.0));
          }
  }
}

TEST_CASE("Weyl decomposition") {
  std::mt19937_64 rng(23);
  for (int rep = 0; rep < 20; ++rep) {
    const SymCubic s3 = random_traceless(3, rng);
    const auto c3 = algebraic_curvature(s3);
    const auto w3 = weyl_decomposition(c3);
    CHECK(w3.weyl_norm_sq <= 1e-10 * std::max(1.0, c3.norm_sq()));
    CHECK(w3.identity_residual <= 1e-10 * std::max(1.0, c3.norm_sq()));
  }
  const SymCubic s4 = random_traceless(4, rng);
  const auto c4 = algebraic_curvature(s4);
  const auto w4 = weyl_decomposition(c4);
  CHECK(w4.weyl_norm_sq > 1e-3);
  CHECK(w4.identity_residual <= 1e-10 * c4.norm_sq());
  CHECK_THROWS_AS(weyl_decomposition(algebraic_curvature(random_traceless(2, rng))), DimensionError);
}

TEST_CASE("n=3 quartic identity comm = 4 gram - |s|^4") {
  std::mt19937_64 rng(29);
  for (int rep = 0; rep < 200; ++rep) {
    const SymCubic s = random_traceless(3, rng);
    const Invariants inv = invariants(s);
    const double sq = inv.norm_sq * inv.norm_sq;
    CHECK(std::abs(inv.comm - (4 * inv.gram - sq)) <= 1e-12 * sq);
  }
}

TEST_CASE("traceless gate") {
  const SymCubic s = SymCubic::from_entries(3, {{{0, 1, 1}, 1.0}});
  try {
    algebraic_curvature(s);
    FAIL("expected TraceError");
  } catch (const TraceError& e) {
    CHECK(e.slice() == 0);
    CHECK(e.trace() == 1.0);
    CHECK(std::string(e.what()).find("slice 1") != std::string::npos);
  }
  CHECK_THROWS_AS(simons_rhs(s), TraceError);
}

TEST_CASE("Simons right-hand side vanishes on the Calabi tensor") {
  for (int n = 2; n <= 8; ++n) {
    const SymCubic s = *calabi_torus(n).closed_form_sigma;
    CHECK(simons_rhs(s).max_abs() <= 1e-12);
    CHECK(std::abs(simons_gap(s)) <= 1e-12);
  }
}

TEST_CASE("Simons right-hand side against an explicit formula") {
  std::mt19937_64 rng(31);
  for (int n = 2; n <= 5; ++n) {
    const SymCubic s = random_traceless(n, rng);
    const SymCubic r = simons_rhs(s);
    Eigen::MatrixXd g(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double v = 0;
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) v += s(i, a, b) * s(j, a, b);
        g(i, j) = v;
      }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double tr = 0;
          for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
              for (int c = 0; c < n; ++c) tr += s(i, a, b) * s(j, b, c) * s(k, c, a);
          double v = (n + 1) * s(i, j, k) + 2 * tr;
          for (int t = 0; t < n; ++t) v -= g(i, t) * s(j, k, t) + g(j, t) * s(i, k, t) + g(k, t) * s(i, j, t);
          CHECK(r(i, j, k) == doctest::Approx(v).epsilon(1e-12).scale(1.0));
        }
  }
}

TEST_CASE("contraction identity <s, rhs(s)> = (n+1)|s|^2 - gram - comm") {
  std::mt19937_64 rng(37);
  for (int n = 2; n <= 6; ++n)
    for (int rep = 0; rep < 50; ++rep) {
      const SymCubic s = random_traceless(n, rng);
      const Invariants inv = invariants(s);
      CHECK(std::abs(inner(s, simons_rhs(s)) - ((n + 1) * inv.norm_sq - inv.gram - inv.comm)) <= 1e-9);
    }
}
