#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "doctest.h"
#include "legpinch/errors.hpp"
#include "legpinch/sym_cubic.hpp"
#include "legpinch/tensor_io.hpp"
#include "oracles.hpp"

using namespace legpinch;

TEST_CASE("component offsets enumerate sorted triples bijectively") {
  for (int n = 2; n <= 8; ++n) {
    std::set<std::size_t> seen;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        for (int k = j; k < n; ++k) seen.insert(SymCubic::offset(i, j, k));
    CHECK(seen.size() == SymCubic::component_count(n));
    CHECK(*seen.rbegin() == SymCubic::component_count(n) - 1);
    CHECK(SymCubic::component_count(n) == static_cast<std::size_t>(n * (n + 1) * (n + 2) / 6));
  }
  CHECK(SymCubic::multiplicity(0, 0, 0) == 1);
  CHECK(SymCubic::multiplicity(0, 1, 1) == 3);
  CHECK(SymCubic::multiplicity(2, 0, 1) == 6);
}

TEST_CASE("entries are addressed by any permutation") {
  const SymCubic s = SymCubic::from_entries(3, {{{2, 0, 1}, 1.5}, {{1, 1, 0}, -2.0}});
  CHECK(s(0, 1, 2) == 1.5);
  CHECK(s(2, 1, 0) == 1.5);
  CHECK(s(0, 1, 1) == -2.0);
  CHECK(s(1, 0, 1) == -2.0);
  CHECK(s(2, 2, 2) == 0.0);
  // the same component twice with one value is accepted
  CHECK_NOTHROW(SymCubic::from_entries(3, {{{0, 1, 2}, 1.0}, {{2, 1, 0}, 1.0}}));
}

TEST_CASE("construction errors") {
  CHECK_THROWS_AS(SymCubic(1), DimensionError);
  CHECK_THROWS_AS(SymCubic::from_entries(3, {{{0, 1, 3}, 1.0}}), IndexError);
  CHECK_THROWS_AS(SymCubic::from_entries(3, {{{-1, 0, 0}, 1.0}}), IndexError);
  CHECK_THROWS_AS(SymCubic::from_entries(3, {{{0, 1, 2}, 1.0}, {{1, 0, 2}, 2.0}}), IndexError);
  const SymCubic s(3);
  CHECK_THROWS_AS(s(0, 0, 3), IndexError);
}

TEST_CASE("from_dense averages over permutations") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  const int n = 4;
  std::vector<double> d(n * n * n);
  for (double& v : d) v = normal(rng);
  const SymCubic s = SymCubic::from_dense(n, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        std::array<int, 3> p{i, j, k};
        std::sort(p.begin(), p.end());
        double sum = 0;
        int cnt = 0;
        do {
          sum += d[(p[0] * n + p[1]) * n + p[2]];
          ++cnt;
        } while (std::next_permutation(p.begin(), p.end()));
        CHECK(s(i, j, k) == doctest::Approx(sum / cnt).epsilon(1e-14));
      }
  CHECK_THROWS_AS(SymCubic::from_dense(3, std::vector<double>(26)), DimensionError);
}

TEST_CASE("norm and inner product against full index sums") {
  std::mt19937_64 rng(5);
  for (int n = 2; n <= 6; ++n) {
    const SymCubic a = random_sym_cubic(n, rng), b = random_sym_cubic(n, rng);
    const auto da = oracle::dense(a), db = oracle::dense(b);
    double nn = 0, ip = 0;
    for (std::size_t i = 0; i < da.size(); ++i) {
      nn += da[i] * da[i];
      ip += da[i] * db[i];
    }
    CHECK(a.norm_sq() == doctest::Approx(nn).epsilon(1e-13));
    CHECK(inner(a, b) == doctest::Approx(ip).epsilon(1e-13));
    CHECK(max_abs_diff(a + b - b, a) <= 1e-14);
    CHECK((a * 2.0)(0, 0, 1) == 2.0 * a(0, 0, 1));
    CHECK((-a)(1, 1, 1) == -a(1, 1, 1));
  }
}

TEST_CASE("traceless projection is an orthogonal projection") {
  std::mt19937_64 rng(7);
  for (int n = 2; n <= 7; ++n) {
    const SymCubic s = random_sym_cubic(n, rng);
    const SymCubic p = project_traceless(s);
    CHECK(p.is_traceless(1e-12));
    CHECK(max_abs_diff(project_traceless(p), p) <= 1e-13);
    CHECK(std::abs(inner(s - p, p)) <= 1e-12 * s.norm_sq());
    // the removed part is sym(t (x) I): check one component directly
    std::vector<double> t(n);
    for (int i = 0; i < n; ++i) t[i] = s.trace_slice(i);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          const double sym = (t[i] * (j == k) + t[j] * (i == k) + t[k] * (i == j)) / 3.0;
          CHECK(s(i, j, k) - p(i, j, k) == doctest::Approx(3.0 * sym / (n + 2)).epsilon(1e-12).scale(1.0));
        }
  }
}

TEST_CASE("max_trace reports the worst slice") {
  const SymCubic s = SymCubic::from_entries(3, {{{1, 0, 0}, 0.5}, {{1, 2, 2}, -2.0}});
  const auto [slice, tr] = s.max_trace();
  CHECK(slice == 1);
  CHECK(tr == doctest::Approx(-1.5));
  CHECK_FALSE(s.is_traceless());
}

TEST_CASE("rotation matches the O(n^6) change of basis") {
  std::mt19937_64 rng(11);
  for (int n = 2; n <= 4; ++n) {
    const SymCubic s = random_sym_cubic(n, rng);
    const Eigen::MatrixXd q = random_orthogonal(n, rng);
    CHECK((q * q.transpose() - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-13);
    const SymCubic r = rotate(s, q);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) {
          double v = 0;
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
              for (int k = 0; k < n; ++k) v += q(a, i) * q(b, j) * q(c, k) * s(i, j, k);
          CHECK(r(a, b, c) == doctest::Approx(v).epsilon(1e-12).scale(1.0));
        }
    CHECK(r.norm_sq() == doctest::Approx(s.norm_sq()).epsilon(1e-12));
    CHECK(max_abs_diff(rotate(s, Eigen::MatrixXd::Identity(n, n)), s) <= 1e-15);
    CHECK_THROWS_AS(rotate(s, Eigen::MatrixXd::Identity(n + 1, n + 1)), DimensionError);
  }
}

TEST_CASE("random generators are seed-determined") {
  std::mt19937_64 a(42), b(42);
  CHECK(max_abs_diff(random_traceless(5, a), random_traceless(5, b)) == 0.0);
}

TEST_CASE("tensor text format round trip") {
  std::mt19937_64 rng(13);
  const SymCubic s = random_traceless(4, rng);
  std::stringstream ss;
  write_tensor(ss, s);
  const SymCubic r = read_tensor(ss);
  CHECK(r.dim() == 4);
  CHECK(max_abs_diff(r, s) == 0.0);
}

TEST_CASE("tensor text format parsing") {
  std::istringstream in("# calabi-like\n3\n1 1 1 1.1547005383792515\n# comment\n2 2 1 -0.57735026918962584\n1 3 3 -5.7735026918962584e-01\n");
  const SymCubic s = read_tensor(in);
  CHECK(s(0, 0, 0) == doctest::Approx(2.0 / std::sqrt(3.0)));
  CHECK(s(0, 1, 1) == doctest::Approx(-1.0 / std::sqrt(3.0)));
  CHECK(s(2, 0, 2) == doctest::Approx(-1.0 / std::sqrt(3.0)));
  CHECK(s.is_traceless(1e-15));

  auto parse = [](const std::string& text) {
    std::istringstream is(text);
    return read_tensor(is);
  };
  CHECK_THROWS_AS(parse(""), FormatError);
  CHECK_THROWS_AS(parse("3\n1 1 x 2\n"), FormatError);
  CHECK_THROWS_AS(parse("3\n1 1 1\n"), FormatError);
  CHECK_THROWS_AS(parse("3\n1 1 4 2\n"), IndexError);
  CHECK_THROWS_AS(parse("3\n0 1 1 2\n"), IndexError);
  CHECK_THROWS_AS(parse("3\n1 2 3 1\n3 2 1 2\n"), IndexError);
  CHECK_THROWS_AS(parse("1\n"), DimensionError);
  CHECK_THROWS_AS(read_tensor_file("/nonexistent/zero.tensor"), Error);
  CHECK(format_double(0.1) == "0.10000000000000001");
}
