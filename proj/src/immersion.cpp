#include "legpinch/immersion.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <thread>

#include "legpinch/errors.hpp"

namespace legpinch {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

std::string fmt_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

VectorXd shifted(const VectorXd& u, int a, double s) {
  VectorXd v = u;
  v(a) += s;
  return v;
}

MatrixXd partials(const Immersion& imm, const VectorXd& u, double h) {
  const int n = imm.n;
  MatrixXd d(imm.real_dim(), n);
  for (int a = 0; a < n; ++a)
    d.col(a) = (imm(shifted(u, a, h)) - imm(shifted(u, a, -h))) / (2.0 * h);
  return d;
}

std::vector<VectorXd> second_partials(const Immersion& imm, const VectorXd& u,
                                      const VectorXd& f0, double h) {
  const int n = imm.n;
  std::vector<VectorXd> d(static_cast<std::size_t>(n) * n);
  for (int a = 0; a < n; ++a) {
    d[a * n + a] = (imm(shifted(u, a, h)) - 2.0 * f0 + imm(shifted(u, a, -h))) / (h * h);
    for (int b = a + 1; b < n; ++b) {
      VectorXd pp = shifted(shifted(u, a, h), b, h);
      VectorXd pm = shifted(shifted(u, a, h), b, -h);
      VectorXd mp = shifted(shifted(u, a, -h), b, h);
      VectorXd mm = shifted(shifted(u, a, -h), b, -h);
      d[a * n + b] = (imm(pp) - imm(pm) - imm(mp) + imm(mm)) / (4.0 * h * h);
      d[b * n + a] = d[a * n + b];
    }
  }
  return d;
}

void check_metric(const MatrixXd& g) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(g, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (!(hi > 0.0) || !(lo > 1e-8 * hi))
    throw DegenerateChartError("induced metric is singular (eigenvalues " + fmt_g(lo) + ", " + fmt_g(hi) + ")");
}

MatrixXd metric(const Immersion& imm, const VectorXd& u, double h) {
  MatrixXd d = partials(imm, u, h);
  return d.transpose() * d;
}

// gamma[(k n + i) n + j]
std::vector<double> christoffel(const Immersion& imm, const VectorXd& u, const MatrixXd& g,
                                double h) {
  const int n = imm.n;
  std::vector<MatrixXd> dg(n);
  for (int c = 0; c < n; ++c)
    dg[c] = (metric(imm, shifted(u, c, h), h) - metric(imm, shifted(u, c, -h), h)) / (2.0 * h);
  const MatrixXd gi = g.inverse();
  std::vector<double> gamma(static_cast<std::size_t>(n) * n * n, 0.0);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int l = 0; l < n; ++l)
          s += gi(k, l) * (dg[i](l, j) + dg[j](l, i) - dg[l](i, j));
        gamma[(k * n + i) * n + j] = 0.5 * s;
      }
  return gamma;
}

// Coordinate components <d_a d_b F, J d_c F>, dense row-major.
std::vector<double> coordinate_sigma(const Immersion& imm, const VectorXd& u, double h) {
  const int n = imm.n;
  const VectorXd f0 = imm(u);
  const MatrixXd d = partials(imm, u, h);
  const auto d2 = second_partials(imm, u, f0, h);
  std::vector<VectorXd> jd(n);
  for (int c = 0; c < n; ++c) jd[c] = apply_j(d.col(c));
  std::vector<double> s(static_cast<std::size_t>(n) * n * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) s[(a * n + b) * n + c] = d2[a * n + b].dot(jd[c]);
  return s;
}

// Gram-Schmidt on the columns of d in index order; coeffs(i, a) expresses e_i.
void gram_schmidt(const MatrixXd& d, MatrixXd& frame, MatrixXd& coeffs) {
  const int n = static_cast<int>(d.cols());
  frame.resize(d.rows(), n);
  coeffs = MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    VectorXd v = d.col(i);
    VectorXd c = VectorXd::Zero(n);
    c(i) = 1.0;
    for (int j = 0; j < i; ++j) {
      const double p = v.dot(frame.col(j));
      v -= p * frame.col(j);
      c -= p * coeffs.row(j).transpose();
    }
    const double len = v.norm();
    if (!(len > 0.0)) throw DegenerateChartError("coordinate vectors are linearly dependent");
    frame.col(i) = v / len;
    coeffs.row(i) = (c / len).transpose();
  }
}

double full_symmetrization_gap4(const std::vector<double>& t, int n) {
  auto at = [&](int i, int j, int k, int l) {
    return t[((static_cast<std::size_t>(i) * n + j) * n + k) * n + l];
  };
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          std::array<int, 4> p{i, j, k, l};
          std::sort(p.begin(), p.end());
          double sum = 0.0;
          int count = 0;
          do {
            sum += at(p[0], p[1], p[2], p[3]);
            ++count;
          } while (std::next_permutation(p.begin(), p.end()));
          worst = std::max(worst, std::abs(at(i, j, k, l) - sum / count));
        }
  return worst;
}

void check_step(double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw DomainError("finite-difference step must be positive");
}

void check_point(const Immersion& imm, const VectorXd& u) {
  if (u.size() != imm.n)
    throw DimensionError("parameter point has " + std::to_string(u.size()) + " coordinates, expected " +
                         std::to_string(imm.n));
}

}  // namespace

Immersion warp_chart(const Immersion& imm, double eps) {
  if (!(eps >= 0.0 && eps < 1.0)) throw DomainError("warp amplitude must lie in [0, 1)");
  Immersion w = imm;
  w.name = imm.name + "_warped";
  VectorXd len(imm.n);
  for (int a = 0; a < imm.n; ++a) len(a) = (imm.hi(a) - imm.lo(a)) * (imm.periodic[a] ? 1.0 : 2.0);
  const VectorXd lo = imm.lo;
  const auto inner = imm.eval;
  w.eval = [inner, lo, len, eps](const VectorXd& u) {
    VectorXd v = u;
    for (Eigen::Index a = 0; a < u.size(); ++a) {
      const double k = 2.0 * std::numbers::pi / len(a);
      v(a) = u(a) + eps / k * std::sin(k * (u(a) - lo(a)));
    }
    return inner(v);
  };
  return w;
}

VectorXd apply_j(const VectorXd& v) {
  if (v.size() % 2 != 0) throw DimensionError("complex structure needs an even real dimension");
  VectorXd out(v.size());
  for (Eigen::Index k = 0; k < v.size(); k += 2) {
    out(k) = -v(k + 1);
    out(k + 1) = v(k);
  }
  return out;
}

double ImmersionJet::b_norm_sq() const {
  double s = 0.0;
  for (const auto& v : B) s += v.squaredNorm();
  return s;
}

double ImmersionJet::normality_residual() const {
  const int n = dim();
  double r = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const VectorXd& v = b(i, j);
      r = std::max(r, std::abs(v.dot(F)));
      r = std::max(r, (v - b(j, i)).cwiseAbs().maxCoeff());
      for (int k = 0; k < n; ++k) r = std::max(r, std::abs(v.dot(frame.col(k))));
    }
  return r;
}

ImmersionJet jet(const Immersion& imm, const VectorXd& u, const JetOptions& opts) {
  check_point(imm, u);
  check_step(opts.h);
  const int n = imm.n;
  ImmersionJet j;
  j.u = u;
  j.F = imm(u);
  j.dF = partials(imm, u, opts.h);
  j.d2F = second_partials(imm, u, j.F, opts.h);
  if (opts.richardson) {
    const double h2 = 0.5 * opts.h;
    j.dF = (4.0 * partials(imm, u, h2) - j.dF) / 3.0;
    const auto fine = second_partials(imm, u, j.F, h2);
    for (std::size_t k = 0; k < fine.size(); ++k) j.d2F[k] = (4.0 * fine[k] - j.d2F[k]) / 3.0;
  }
  j.g = j.dF.transpose() * j.dF;
  check_metric(j.g);
  gram_schmidt(j.dF, j.frame, j.frame_coeffs);
  j.gamma = christoffel(imm, u, j.g, opts.h);

  const MatrixXd gi = j.g.inverse();
  std::vector<VectorXd> bc(static_cast<std::size_t>(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const VectorXd& d2 = j.d2F[a * n + b];
      const VectorXd tang = j.dF * (gi * (j.dF.transpose() * d2));
      bc[a * n + b] = d2 - tang + j.g(a, b) * j.F;
    }
  const MatrixXd& e = j.frame_coeffs;
  j.B.assign(static_cast<std::size_t>(n) * n, VectorXd::Zero(imm.real_dim()));
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          const double w = e(i, a) * e(k, b);
          if (w != 0.0) j.B[i * n + k] += w * bc[a * n + b];
        }
  j.H = VectorXd::Zero(imm.real_dim());
  for (int i = 0; i < n; ++i) j.H += j.B[i * n + i];
  j.H /= n;
  return j;
}

double legendrian_residual(const ImmersionJet& j) {
  const int n = j.dim();
  const VectorXd jf = apply_j(j.F);
  double r = 0.0;
  for (int i = 0; i < n; ++i) {
    r = std::max(r, std::abs(jf.dot(j.dF.col(i))));
    const VectorXd ji = apply_j(j.dF.col(i));
    for (int k = 0; k < n; ++k) r = std::max(r, std::abs(ji.dot(j.dF.col(k))));
  }
  return r;
}

SigmaAt sigma_at(const ImmersionJet& j) {
  const double leg = legendrian_residual(j);
  if (!(leg <= 1e-6))
    throw LegendrianViolation("Legendrian residual " + fmt_g(leg) + " exceeds 1e-6");
  const int n = j.dim();
  std::vector<VectorXd> je(n);
  for (int k = 0; k < n; ++k) je[k] = apply_j(j.frame.col(k));
  std::vector<double> raw(static_cast<std::size_t>(n) * n * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) raw[(a * n + b) * n + c] = j.b(a, b).dot(je[c]);
  SigmaAt out{SymCubic::from_dense(n, raw), 0.0};
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        out.symmetry_residual =
            std::max(out.symmetry_residual, std::abs(raw[(a * n + b) * n + c] - out.sigma(a, b, c)));
  return out;
}

CodazziResult codazzi_residual(const Immersion& imm, const VectorXd& u, double h) {
  check_point(imm, u);
  check_step(h);
  const int n = imm.n;
  const std::size_t n3 = static_cast<std::size_t>(n) * n * n;
  const MatrixXd d = partials(imm, u, h);
  const MatrixXd g = d.transpose() * d;
  check_metric(g);
  MatrixXd frame, e;
  gram_schmidt(d, frame, e);
  const auto gamma = christoffel(imm, u, g, h);
  auto gam = [&](int k, int i, int j) { return gamma[(k * n + i) * n + j]; };
  const auto s0 = coordinate_sigma(imm, u, h);
  auto s = [&](int a, int b, int c) { return s0[(a * n + b) * n + c]; };

  // nabla[(((a n + b) n + c) n + d)] = sigma~_{abc;d}
  std::vector<double> nabla(n3 * n);
  for (int dd = 0; dd < n; ++dd) {
    const auto sp = coordinate_sigma(imm, shifted(u, dd, h), h);
    const auto sm = coordinate_sigma(imm, shifted(u, dd, -h), h);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) {
          const std::size_t idx = (a * n + b) * n + c;
          double v = (sp[idx] - sm[idx]) / (2.0 * h);
          for (int m = 0; m < n; ++m)
            v -= gam(m, dd, a) * s(m, b, c) + gam(m, dd, b) * s(a, m, c) + gam(m, dd, c) * s(a, b, m);
          nabla[idx * n + dd] = v;
        }
  }

  // Transform all four slots to the orthonormal frame, one slot at a time.
  std::vector<double> cur = nabla, next(cur.size());
  const std::size_t stride[4] = {n3, static_cast<std::size_t>(n) * n, static_cast<std::size_t>(n), 1};
  for (int slot = 0; slot < 4; ++slot) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t idx = 0; idx < cur.size(); ++idx) {
      const int a = static_cast<int>((idx / stride[slot]) % n);
      const std::size_t base = idx - a * stride[slot];
      for (int i = 0; i < n; ++i) next[base + i * stride[slot]] += e(i, a) * cur[idx];
    }
    std::swap(cur, next);
  }

  CodazziResult r;
  for (double v : cur) r.max_abs_derivative = std::max(r.max_abs_derivative, std::abs(v));
  r.residual = full_symmetrization_gap4(cur, n);
  return r;
}

double gauss_residual(const Immersion& imm, const VectorXd& u, double h) {
  check_point(imm, u);
  check_step(h);
  const int n = imm.n;
  const std::size_t nn = static_cast<std::size_t>(n);
  const MatrixXd d = partials(imm, u, h);
  const MatrixXd g = d.transpose() * d;
  check_metric(g);
  const auto gamma = christoffel(imm, u, g, h);
  auto gam = [&](int k, int i, int j) { return gamma[(k * nn + i) * nn + j]; };

  std::vector<std::vector<double>> dgam(n);
  for (int c = 0; c < n; ++c) {
    const VectorXd up = shifted(u, c, h), um = shifted(u, c, -h);
    const MatrixXd gp = metric(imm, up, h), gm = metric(imm, um, h);
    const auto cp = christoffel(imm, up, gp, h);
    const auto cm = christoffel(imm, um, gm, h);
    dgam[c].resize(cp.size());
    for (std::size_t k = 0; k < cp.size(); ++k) dgam[c][k] = (cp[k] - cm[k]) / (2.0 * h);
  }
  auto dg = [&](int c, int k, int i, int j) { return dgam[c][(k * nn + i) * nn + j]; };

  // R^a_{bcd}
  std::vector<double> rup(nn * nn * nn * nn);
  auto ri = [&](int a, int b, int c, int dd) { return ((a * nn + b) * nn + c) * nn + dd; };
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int dd = 0; dd < n; ++dd) {
          double v = dg(c, a, dd, b) - dg(dd, a, c, b);
          for (int m = 0; m < n; ++m) v += gam(a, c, m) * gam(m, dd, b) - gam(a, dd, m) * gam(m, c, b);
          rup[ri(a, b, c, dd)] = v;
        }
  // Rm(X=d_c, Y=d_d, Z=d_a, W=d_b) = g_{ae} R^e_{bcd}, stored at (c, d, a, b).
  std::vector<double> rm(rup.size(), 0.0);
  for (int c = 0; c < n; ++c)
    for (int dd = 0; dd < n; ++dd)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          double v = 0.0;
          for (int m = 0; m < n; ++m) v += g(a, m) * rup[ri(m, b, c, dd)];
          rm[ri(c, dd, a, b)] = v;
        }

  MatrixXd frame, e;
  gram_schmidt(d, frame, e);
  std::vector<double> cur = rm, next(cur.size());
  const std::size_t stride[4] = {nn * nn * nn, nn * nn, nn, 1};
  for (int slot = 0; slot < 4; ++slot) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t idx = 0; idx < cur.size(); ++idx) {
      const int a = static_cast<int>((idx / stride[slot]) % nn);
      const std::size_t base = idx - a * stride[slot];
      for (int i = 0; i < n; ++i) next[base + i * stride[slot]] += e(i, a) * cur[idx];
    }
    std::swap(cur, next);
  }

  const ImmersionJet j = jet(imm, u, JetOptions{h, false});
  const double leg = legendrian_residual(j);
  const double tol_leg = std::max(1e-6, 10.0 * h * h);
  if (!(leg <= tol_leg))
    throw LegendrianViolation("Legendrian residual " + fmt_g(leg) + " too large for the Gauss check");
  // sigma in the same frame, without the 1e-6 gate of sigma_at so that coarse
  // steps can be used for convergence studies.
  std::vector<VectorXd> je(n);
  for (int k = 0; k < n; ++k) je[k] = apply_j(j.frame.col(k));
  auto sig = [&](int a, int b, int c) { return j.b(a, b).dot(je[c]); };

  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int jj = 0; jj < n; ++jj)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double rhs = (i == k && jj == l ? 1.0 : 0.0) - (i == l && jj == k ? 1.0 : 0.0);
          for (int m = 0; m < n; ++m) rhs += sig(i, k, m) * sig(jj, l, m) - sig(i, l, m) * sig(jj, k, m);
          worst = std::max(worst, std::abs(cur[ri(i, jj, k, l)] - rhs));
        }
  return worst;
}

std::vector<VectorXd> grid_points(const Immersion& imm, const GridSpec& grid) {
  const int n = imm.n;
  std::vector<int> res = grid.resolution;
  if (res.size() == 1 && n > 1) res.assign(n, res[0]);
  if (static_cast<int>(res.size()) != n)
    throw DimensionError("grid has " + std::to_string(res.size()) + " axes, immersion has " + std::to_string(n));
  std::size_t total = 1;
  for (int r : res) {
    if (r < 1) throw DomainError("grid resolution must be positive");
    total *= static_cast<std::size_t>(r);
  }
  std::vector<VectorXd> pts;
  pts.reserve(total);
  std::vector<int> idx(n, 0);
  for (std::size_t p = 0; p < total; ++p) {
    VectorXd u(n);
    for (int a = 0; a < n; ++a) {
      const double span = imm.hi(a) - imm.lo(a);
      const double t = imm.periodic[a] ? double(idx[a]) / res[a] : (idx[a] + 0.5) / res[a];
      u(a) = imm.lo(a) + span * t;
    }
    pts.push_back(std::move(u));
    for (int a = n - 1; a >= 0; --a) {
      if (++idx[a] < res[a]) break;
      idx[a] = 0;
    }
  }
  return pts;
}

int default_thread_count() {
  if (const char* env = std::getenv("LEGPINCH_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(std::min<long>(v, 256));
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

std::vector<ScanRecord> field_scan(const Immersion& imm, const GridSpec& grid, const ScanOptions& opts) {
  const auto pts = grid_points(imm, grid);
  std::vector<ScanRecord> out(pts.size());

  auto work = [&](std::size_t i) {
    ScanRecord& r = out[i];
    r.index = i;
    r.u = pts[i];
    try {
      const ImmersionJet j = jet(imm, pts[i], opts.jet);
      r.legendrian_residual = legendrian_residual(j);
      r.mean_curvature = j.H.norm();
      SigmaAt s = sigma_at(j);
      r.symmetry_residual = s.symmetry_residual;
      const auto [slice, tr] = s.sigma.max_trace();
      if (std::abs(tr) > opts.tol_trace)
        throw TraceError("slice " + std::to_string(slice + 1) + " has trace " + fmt_g(tr), slice, tr);
      r.report = pinching_report(project_traceless(s.sigma), opts.pinch);
    } catch (const Error& e) {
      r.error = e.what();
    }
  };

  const int threads = std::max(1, std::min<int>(opts.threads > 0 ? opts.threads : default_thread_count(),
                                                static_cast<int>(pts.size())));
  if (threads <= 1) {
    for (std::size_t i = 0; i < pts.size(); ++i) work(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < pts.size(); i = next++) work(i);
    });
  for (auto& th : pool) th.join();
  return out;
}

}  // namespace legpinch
