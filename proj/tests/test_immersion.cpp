#include <cmath>
#include <numbers>

#include "doctest.h"
#include "legpinch/catalog.hpp"
#include "legpinch/cubic_spectrum.hpp"
#include "legpinch/errors.hpp"
#include "legpinch/immersion.hpp"
#include "legpinch/tensor_core.hpp"

using namespace legpinch;

namespace {

// Polar angles stay `margin` away from the coordinate poles.
Eigen::VectorXd random_point(const Immersion& im, std::mt19937_64& rng, double margin = 0.1) {
  Eigen::VectorXd u(im.n);
  for (int a = 0; a < im.n; ++a) {
    const double pad = im.periodic[a] ? 0.0 : margin;
    u(a) = std::uniform_real_distribution<double>(im.lo(a) + pad, im.hi(a) - pad)(rng);
  }
  return u;
}

}  // namespace

TEST_CASE("complex structure") {
  Eigen::VectorXd v(4);
  v << 1, 2, 3, 4;
  Eigen::VectorXd w(4);
  w << -2, 1, -4, 3;
  CHECK(apply_j(v) == w);
  CHECK(apply_j(apply_j(v)) == -v);
  CHECK_THROWS_AS(apply_j(Eigen::VectorXd::Ones(3)), DimensionError);
}

TEST_CASE("jet of totally geodesic spheres") {
  std::mt19937_64 rng(151);
  for (int n = 1; n <= 4; ++n) {
    const auto e = totally_geodesic(n);
    for (int k = 0; k < 10; ++k) {
      const ImmersionJet j = jet(e.immersion, random_point(e.immersion, rng));
      CHECK(std::sqrt(j.b_norm_sq()) <= 1e-6);
      CHECK(j.H.norm() <= 1e-6);
      CHECK((j.frame.transpose() * j.frame - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-12);
      CHECK((j.frame - j.dF * j.frame_coeffs.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }
}

TEST_CASE("jet of Calabi tori") {
  std::mt19937_64 rng(157);
  for (int n = 2; n <= 4; ++n) {
    const auto e = calabi_torus(n);
    for (int k = 0; k < 10; ++k) {
      const ImmersionJet j = jet(e.immersion, random_point(e.immersion, rng));
      CHECK(std::abs(j.b_norm_sq() - *e.expected.norm_sq) <= 1e-5);
      CHECK(j.H.norm() <= 1e-5);
      CHECK(j.normality_residual() <= kTolFd);
      CHECK(legendrian_residual(j) <= 1e-8);
      CHECK((j.g - j.g.transpose()).cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("Richardson extrapolation is available") {
  const auto e = calabi_torus(3);
  const ImmersionJet j = jet(e.immersion, e.witness, JetOptions{1e-3, true});
  CHECK(std::abs(j.b_norm_sq() - 10.0 / 3) <= 1e-7);
  CHECK(legendrian_residual(j) <= 1e-10);
}

TEST_CASE("jet preconditions") {
  const auto e = totally_geodesic(2);
  Eigen::VectorXd pole(2);
  pole << 0.0, 1.0;
  CHECK_THROWS_AS(jet(e.immersion, pole), DegenerateChartError);
  CHECK_THROWS_AS(jet(e.immersion, e.witness, JetOptions{0.0, false}), DomainError);
  CHECK_THROWS_AS(jet(e.immersion, Eigen::VectorXd::Zero(3)), DimensionError);
}

TEST_CASE("Christoffel symbols of the round sphere chart") {
  // u = (theta, phi): g = diag(1, sin^2 theta)
  const auto e = totally_geodesic(2);
  Eigen::VectorXd u(2);
  u << 0.9, 1.3;
  const ImmersionJet j = jet(e.immersion, u);
  const double s = std::sin(0.9), c = std::cos(0.9);
  CHECK(j.christoffel(0, 1, 1) == doctest::Approx(-s * c).epsilon(1e-6));
  CHECK(j.christoffel(1, 0, 1) == doctest::Approx(c / s).epsilon(1e-6));
  CHECK(j.christoffel(1, 1, 0) == doctest::Approx(c / s).epsilon(1e-6));
  CHECK(std::abs(j.christoffel(0, 0, 0)) <= 1e-6);
}

TEST_CASE("Legendrian residual") {
  std::mt19937_64 rng(163);
  for (int n = 2; n <= 5; ++n) {
    const auto c = calabi_torus(n);
    const auto g = totally_geodesic(n);
    for (int k = 0; k < 5; ++k) {
      CHECK(legendrian_residual(jet(c.immersion, random_point(c.immersion, rng))) <= 1e-8);
      CHECK(legendrian_residual(jet(g.immersion, random_point(g.immersion, rng))) <= 1e-12);
    }
  }
  const auto ctl = control_non_legendrian();
  CHECK(legendrian_residual(jet(ctl.immersion, ctl.witness)) >= 0.1);
}

TEST_CASE("sigma field") {
  std::mt19937_64 rng(167);
  const auto c3 = calabi_torus(3);
  for (int k = 0; k < 5; ++k) {
    const SigmaAt s = sigma_at(jet(c3.immersion, random_point(c3.immersion, rng)));
    CHECK(s.symmetry_residual <= 10 * kTolFd);
    const SymCubic t = project_traceless(s.sigma);
    CHECK(std::abs(t.norm_sq() - 10.0 / 3) <= 1e-5);
    const AdaptedSpectrum a = theta(t), b = theta(*c3.closed_form_sigma);
    CHECK(std::abs(a.theta - b.theta) <= 1e-5);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(a.mu(i) - b.mu(i)) <= 1e-5);
    CHECK(simons_gap(t) <= 1e-4);
    CHECK(simons_rhs(t).max_abs() <= 1e-4);
  }
  const auto c2 = calabi_torus(2);
  const SigmaAt s2 = sigma_at(jet(c2.immersion, random_point(c2.immersion, rng)));
  CHECK(std::abs(theta(project_traceless(s2.sigma)).theta - 1 / std::sqrt(2.0)) <= 1e-5);

  const auto g = totally_geodesic(3);
  CHECK(sigma_at(jet(g.immersion, g.witness)).sigma.max_abs() <= 1e-6);

  const auto ctl = control_non_legendrian();
  CHECK_THROWS_AS(sigma_at(jet(ctl.immersion, ctl.witness)), LegendrianViolation);
}

TEST_CASE("Codazzi residual") {
  std::mt19937_64 rng(173);
  for (int n = 2; n <= 4; ++n) {
    const auto c = calabi_torus(n);
    const CodazziResult r = codazzi_residual(c.immersion, random_point(c.immersion, rng));
    CHECK(r.residual <= kTolCodazzi);
    CHECK(r.max_abs_derivative <= kTolCodazzi);
  }
  const auto g = totally_geodesic(3);
  CHECK(codazzi_residual(g.immersion, g.witness).residual <= 1e-8);
  CHECK_THROWS_AS(codazzi_residual(g.immersion, g.witness, -1.0), DomainError);
}

TEST_CASE("Gauss residual") {
  // Christoffels of the polar chart blow up like cot at the poles, and the
  // nested stencils differentiate them twice; sample away from the poles.
  std::mt19937_64 rng(179);
  for (int n = 2; n <= 4; ++n) {
    const auto c = calabi_torus(n);
    for (int k = 0; k < 3; ++k) CHECK(gauss_residual(c.immersion, random_point(c.immersion, rng, 0.5)) <= kTolGauss);
  }
  // sigma = 0, so this bounds the deviation of every curvature component
  // from that of the unit sphere
  const auto g = totally_geodesic(2);
  for (int k = 0; k < 5; ++k) CHECK(gauss_residual(g.immersion, random_point(g.immersion, rng, 0.5)) <= 1e-4);
}

TEST_CASE("second-order convergence in a warped chart") {
  const auto c = calabi_torus(3);
  const Immersion w = warp_chart(c.immersion, 0.3);
  Eigen::VectorXd u = c.witness;
  u(0) += 0.3;
  const double h = 0.02;
  const double c1 = codazzi_residual(w, u, h).residual, c2 = codazzi_residual(w, u, h / 2).residual;
  CHECK(c2 / c1 >= 0.2);
  CHECK(c2 / c1 <= 0.35);
  const double g1 = gauss_residual(w, u, h), g2 = gauss_residual(w, u, h / 2);
  CHECK(g2 / g1 >= 0.2);
  CHECK(g2 / g1 <= 0.35);
  const double b1 = std::abs(jet(w, u, {h, false}).b_norm_sq() - 10.0 / 3);
  const double b2 = std::abs(jet(w, u, {h / 2, false}).b_norm_sq() - 10.0 / 3);
  CHECK(b1 / b2 >= 3.0);
  CHECK(b1 / b2 <= 5.0);
  // the warped chart describes the same immersion
  CHECK(std::abs(jet(w, u).b_norm_sq() - 10.0 / 3) <= 1e-5);
  CHECK_THROWS_AS(warp_chart(c.immersion, 1.0), DomainError);
}

TEST_CASE("grid points are row-major") {
  const auto e = totally_geodesic(2);
  const auto pts = grid_points(e.immersion, GridSpec{{2, 3}});
  REQUIRE(pts.size() == 6);
  const double width = e.immersion.hi(0) - e.immersion.lo(0);
  CHECK(pts[0](0) == doctest::Approx(e.immersion.lo(0) + 0.25 * width));
  CHECK(pts[0](1) == 0.0);
  CHECK(pts[1](1) == doctest::Approx(2 * std::numbers::pi / 3));
  CHECK(pts[3](0) == doctest::Approx(e.immersion.lo(0) + 0.75 * width));
  CHECK(grid_points(e.immersion, GridSpec{{4}}).size() == 16);
  CHECK_THROWS_AS(grid_points(e.immersion, GridSpec{{2, 2, 2}}), DimensionError);
  CHECK_THROWS_AS(grid_points(e.immersion, GridSpec{{0, 2}}), DomainError);
}

TEST_CASE("field scan is deterministic and records point errors") {
  const auto c = calabi_torus(3);
  ScanOptions one, many;
  one.threads = 1;
  many.threads = 4;
  const auto a = field_scan(c.immersion, GridSpec{{3}}, one);
  const auto b = field_scan(c.immersion, GridSpec{{3}}, many);
  REQUIRE(a.size() == 27);
  REQUIRE(b.size() == 27);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].index == i);
    CHECK(b[i].index == i);
    REQUIRE(a[i].report);
    REQUIRE(b[i].report);
    CHECK(a[i].report->theta == b[i].report->theta);
    CHECK(a[i].report->norm_sq == b[i].report->norm_sq);
  }
  const auto ctl = field_scan(control_non_legendrian().immersion, GridSpec{{4}});
  REQUIRE(ctl.size() == 16);
  for (const auto& r : ctl) {
    CHECK_FALSE(r.report.has_value());
    CHECK(r.error.find("Legendrian") != std::string::npos);
  }
}

TEST_CASE("field scan of Calabi n=2 on a 50x50 grid") {
  const auto recs = field_scan(calabi_torus(2).immersion, GridSpec{{50}});
  REQUIRE(recs.size() == 2500);
  for (const auto& r : recs) {
    REQUIRE(r.report);
    CHECK(std::abs(r.report->theta - 1 / std::sqrt(2.0)) <= 1e-5);
  }
}

TEST_CASE("field scan of totally geodesic spheres") {
  for (int n = 2; n <= 3; ++n) {
    const auto recs = field_scan(totally_geodesic(n).immersion, GridSpec{{6}});
    for (const auto& r : recs) {
      REQUIRE(r.report);
      CHECK(r.report->norm_sq <= 1e-10);
    }
  }
}

TEST_CASE("field scan of Calabi n=3 on a 20x20x20 grid") {
  const auto recs = field_scan(calabi_torus(3).immersion, GridSpec{{20}});
  REQUIRE(recs.size() == 8000);
  double worst = 0;
  for (const auto& r : recs) {
    REQUIRE(r.report);
    worst = std::max(worst, std::abs(r.report->gap_main));
  }
  CHECK(worst <= 1e-5);
}
