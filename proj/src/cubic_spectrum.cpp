#include "legpinch/cubic_spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <vector>

#include "legpinch/errors.hpp"

namespace legpinch {

namespace {

// Dense copy of a cubic for the inner loops of the optimizers.
class DenseCubic {
 public:
  explicit DenseCubic(const SymCubic& s) : n_(s.dim()), d_(s.dense()) {}

  int dim() const { return n_; }

  double at(int i, int j, int k) const { return d_[(static_cast<std::size_t>(i) * n_ + j) * n_ + k]; }

  double value(const Eigen::VectorXd& x) const {
    double f = 0.0;
    for (int i = 0; i < n_; ++i) {
      double fi = 0.0;
      for (int j = 0; j < n_; ++j) {
        double fij = 0.0;
        for (int k = 0; k < n_; ++k) fij += at(i, j, k) * x(k);
        fi += fij * x(j);
      }
      f += fi * x(i);
    }
    return f;
  }

  Eigen::MatrixXd slice(const Eigen::VectorXd& x) const {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_, n_);
    for (int i = 0; i < n_; ++i) {
      if (x(i) == 0.0) continue;
      for (int j = 0; j < n_; ++j)
        for (int k = 0; k < n_; ++k) a(j, k) += x(i) * at(i, j, k);
    }
    return a;
  }

  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const { return slice(x) * x; }

 private:
  int n_;
  std::vector<double> d_;
};

// Orthonormal basis of the complement of the unit vector x, as columns.
Eigen::MatrixXd complement_basis(const Eigen::VectorXd& x) {
  const int n = static_cast<int>(x.size());
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(x);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  return q.rightCols(n - 1);
}

struct LocalMax {
  Eigen::VectorXd x;
  double value = -std::numeric_limits<double>::infinity();
  double residual = std::numeric_limits<double>::infinity();
};

double lagrange_residual(const DenseCubic& c, const Eigen::VectorXd& x) {
  const Eigen::VectorXd g = c.gradient(x);
  return (g - g.dot(x) * x).cwiseAbs().maxCoeff();
}

// Shifted power iteration x <- normalize(sigma(x,x,.) + alpha x), switching to
// Riemannian Newton steps once the projected Hessian is negative definite.
// alpha doubles whenever a step fails to ascend, capped at 2|sigma|_F which
// makes the shifted objective convex on the ball.
LocalMax ascend(const DenseCubic& c, Eigen::VectorXd x, double alpha, double alpha_max,
                double scale, int max_iter, double tol) {
  const int n = c.dim();
  LocalMax out;
  const double norm = x.norm();
  if (!(norm > 0.0)) return out;
  x /= norm;
  const double stop = std::min(tol, 1e-14 * std::max(1.0, scale));
  double f = c.value(x);
  double res = std::numeric_limits<double>::infinity();
  // Saddles are fixed points too; leave when the residual stops improving.
  double mark = res;
  int mark_it = 0;
  for (int it = 0; it < max_iter; ++it) {
    const Eigen::MatrixXd a = c.slice(x);
    const Eigen::VectorXd g = a * x;
    const double lambda = g.dot(x);
    const Eigen::VectorXd r = g - lambda * x;
    res = r.cwiseAbs().maxCoeff();
    if (res <= stop) break;
    if (res < 0.5 * mark) {
      mark = res;
      mark_it = it;
    } else if (it - mark_it >= 100) {
      break;
    }

    if (res < 1e-2 * std::max(1.0, scale)) {
      const Eigen::MatrixXd q = complement_basis(x);
      const Eigen::MatrixXd h =
          q.transpose() * (2.0 * a - lambda * Eigen::MatrixXd::Identity(n, n)) * q;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
      // Degenerate critical sets converge only linearly; accept them early.
      if (!(es.eigenvalues().maxCoeff() < 0.0) && res <= 1e-2 * tol) break;
      // Near a saddle: step off along the ascending direction.
      if (es.eigenvalues().maxCoeff() > 1e-6 * std::max(1.0, scale) && res < 1e-6 * std::max(1.0, scale)) {
        const Eigen::VectorXd v = q * es.eigenvectors().col(n - 2);
        const Eigen::VectorXd xp = (x + 0.1 * v).normalized();
        const Eigen::VectorXd xm = (x - 0.1 * v).normalized();
        const double fp = c.value(xp), fm = c.value(xm);
        if (std::max(fp, fm) > f) {
          x = fp >= fm ? xp : xm;
          f = std::max(fp, fm);
          mark = std::numeric_limits<double>::infinity();
          mark_it = it;
          continue;
        }
      }
      if (es.eigenvalues().maxCoeff() < 0.0) {
        const Eigen::VectorXd step =
            -q * (es.eigenvectors() *
                  (es.eigenvalues().cwiseInverse().asDiagonal() * (es.eigenvectors().transpose() * (q.transpose() * r))));
        Eigen::VectorXd xn = (x + step).normalized();
        const double fn = c.value(xn);
        if (fn >= f - 1e-13 * std::max(1.0, std::abs(f)) && lagrange_residual(c, xn) < res) {
          x = xn;
          f = fn;
          continue;
        }
      }
    }

    for (;;) {
      Eigen::VectorXd xn = g + alpha * x;
      const double nn = xn.norm();
      if (nn > 0.0) {
        xn /= nn;
        const double fn = c.value(xn);
        if (fn >= f - 1e-15 * std::max(1.0, std::abs(f)) || alpha >= alpha_max) {
          x = xn;
          f = fn;
          break;
        }
      }
      alpha = std::min(2.0 * alpha, alpha_max);
    }
  }
  out.x = x;
  out.value = c.value(x);
  out.residual = lagrange_residual(c, x);
  return out;
}

struct StartSet {
  std::vector<Eigen::VectorXd> points;
};

StartSet make_starts(const SymCubic& sigma, const DenseCubic& c, int random_starts,
                     std::uint64_t seed) {
  const int n = sigma.dim();
  StartSet s;
  for (int i = 0; i < n; ++i) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma.slice(i));
    Eigen::VectorXd v = es.eigenvectors().col(n - 1);
    if (c.value(v) < 0.0) v = -v;
    s.points.push_back(v);
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int k = 0; k < random_starts; ++k) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = normal(rng);
    s.points.push_back(v);
  }
  return s;
}

struct ShiftParams {
  double alpha, alpha_max, scale;
};

ShiftParams shift_params(const SymCubic& sigma) {
  const double fro = std::sqrt(sigma.norm_sq());
  const double alpha_max = 2.0 * fro;
  return {std::min(sigma.dim() * sigma.max_abs(), alpha_max), alpha_max, fro};
}

// Descending eigenpairs of sigma(e1,.,.) on the complement of e1, with a
// deterministic sign and tie order.
void adapted_basis(const DenseCubic& c, AdaptedSpectrum& s) {
  const int n = c.dim();
  const Eigen::MatrixXd q = complement_basis(s.e1);
  const Eigen::MatrixXd a = c.slice(s.e1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(q.transpose() * a * q);

  struct Pair {
    double value;
    Eigen::VectorXd vec;
  };
  std::vector<Pair> pairs;
  for (int i = 0; i < n - 1; ++i) {
    Eigen::VectorXd v = (q * es.eigenvectors().col(i)).normalized();
    for (int k = 0; k < n; ++k) {
      if (std::abs(v(k)) > 1e-12) {
        if (v(k) < 0) v = -v;
        break;
      }
    }
    pairs.push_back({es.eigenvalues()(i), v});
  }
  const double tie = 1e-10 * std::max(1.0, std::abs(s.theta));
  std::sort(pairs.begin(), pairs.end(), [&](const Pair& p, const Pair& r) {
    if (std::abs(p.value - r.value) > tie) return p.value > r.value;
    return std::lexicographical_compare(p.vec.begin(), p.vec.end(), r.vec.begin(), r.vec.end());
  });

  s.mu.resize(n);
  s.basis.resize(n, n);
  s.mu(0) = s.theta;
  s.basis.row(0) = s.e1.transpose();
  for (int i = 0; i < n - 1; ++i) {
    s.mu(i + 1) = pairs[i].value;
    s.basis.row(i + 1) = pairs[i].vec.transpose();
  }
}

// Cube-face grid: for each face x_a = +-1 the remaining coordinates run over
// cell centres of an m^(n-1) lattice in (-1,1)^(n-1); points are normalized.
template <class Visit>
void for_each_face_point(int n, int m, Visit&& visit) {
  Eigen::VectorXd x(n);
  std::vector<int> idx(n - 1, 0);
  for (int axis = 0; axis < n; ++axis)
    for (int sign = -1; sign <= 1; sign += 2) {
      std::fill(idx.begin(), idx.end(), 0);
      for (;;) {
        int p = 0;
        for (int d = 0; d < n; ++d) {
          if (d == axis) {
            x(d) = sign;
          } else {
            x(d) = -1.0 + (2.0 * idx[p] + 1.0) / m;
            ++p;
          }
        }
        visit(x / x.norm());
        int d = 0;
        while (d < n - 1 && ++idx[d] == m) idx[d++] = 0;
        if (d == n - 1) break;
      }
    }
}

// Keeps the k largest (value, direction) pairs.
class TopK {
 public:
  explicit TopK(std::size_t k) : k_(k) {}
  void offer(double v, const Eigen::VectorXd& x) {
    if (items_.size() == k_ && v <= items_.back().first) return;
    auto it = std::upper_bound(items_.begin(), items_.end(), v,
                               [](double a, const auto& b) { return a > b.first; });
    items_.insert(it, {v, x});
    if (items_.size() > k_) items_.pop_back();
  }
  const std::vector<std::pair<double, Eigen::VectorXd>>& items() const { return items_; }

 private:
  std::size_t k_;
  std::vector<std::pair<double, Eigen::VectorXd>> items_;
};

int default_resolution(int n) {
  switch (n) {
    case 2: return 250000;
    case 3: return 500;
    default: return 64;
  }
}

}  // namespace

double cubic_form(const SymCubic& sigma, const Eigen::VectorXd& x) {
  if (x.size() != sigma.dim()) throw DimensionError("cubic_form: vector has the wrong dimension");
  return DenseCubic(sigma).value(x);
}

Eigen::VectorXd cubic_gradient(const SymCubic& sigma, const Eigen::VectorXd& x) {
  if (x.size() != sigma.dim()) throw DimensionError("cubic_gradient: vector has the wrong dimension");
  return DenseCubic(sigma).gradient(x);
}

Eigen::MatrixXd cubic_slice(const SymCubic& sigma, const Eigen::VectorXd& x) {
  if (x.size() != sigma.dim()) throw DimensionError("cubic_slice: vector has the wrong dimension");
  return DenseCubic(sigma).slice(x);
}

AdaptedSpectrum theta(const SymCubic& sigma, const ThetaOptions& opts) {
  const int n = sigma.dim();
  AdaptedSpectrum s;
  if (sigma.max_abs() == 0.0) {
    s.theta = 0.0;
    s.e1 = Eigen::VectorXd::Unit(n, 0);
    s.mu = Eigen::VectorXd::Zero(n);
    s.basis = Eigen::MatrixXd::Identity(n, n);
    s.lagrange_residual = 0.0;
    s.multiplicity_one = false;
    if (opts.oracle) s.oracle_theta = 0.0;
    return s;
  }

  const DenseCubic c(sigma);
  const ShiftParams sp = shift_params(sigma);
  const StartSet starts = make_starts(sigma, c, opts.starts, opts.seed);

  std::vector<LocalMax> results;
  results.reserve(starts.points.size());
  for (const auto& x0 : starts.points)
    results.push_back(ascend(c, x0, sp.alpha, sp.alpha_max, sp.scale, opts.max_iter, opts.tol));

  // Argmax in start order: later starts replace earlier ones only when strictly better.
  const LocalMax* best = nullptr;
  const LocalMax* best_any = nullptr;
  for (const auto& r : results) {
    if (!best_any || r.value > best_any->value) best_any = &r;
    if (r.residual <= opts.tol && (!best || r.value > best->value)) best = &r;
  }
  if (!best) {
    std::ostringstream os;
    os << "theta: no start reached Lagrange residual " << opts.tol << " in " << opts.max_iter
       << " iterations";
    throw ConvergenceError(os.str(), best_any->x, best_any->value, best_any->residual);
  }

  s.e1 = best->x;
  s.theta = best->value;
  s.lagrange_residual = best->residual;
  adapted_basis(c, s);

  const double mult_tol = opts.tol * std::max(1.0, std::abs(s.theta));
  s.multiplicity_one = true;
  for (const auto& r : results) {
    if (r.residual <= opts.tol && r.value >= s.theta - mult_tol && (r.x - s.e1).norm() > 10.0 * mult_tol) {
      s.multiplicity_one = false;
      break;
    }
  }

  if (opts.oracle) {
    const double bf = theta_bruteforce(sigma);
    s.oracle_theta = bf;
    if (std::abs(bf - s.theta) > 1e-4 * std::max(std::abs(s.theta), 1e-300)) {
      std::ostringstream os;
      os << "theta: optimizer value " << s.theta << " disagrees with brute force " << bf;
      throw ConvergenceError(os.str(), s.e1, s.theta, s.lagrange_residual);
    }
  }
  return s;
}

double theta_bruteforce(const SymCubic& sigma, int resolution) {
  const int n = sigma.dim();
  if (n > 4) throw DimensionError("theta_bruteforce: n must be <= 4");
  if (sigma.max_abs() == 0.0) return 0.0;
  const int m = resolution > 0 ? resolution : default_resolution(n);
  const DenseCubic c(sigma);

  TopK top(8);
  for_each_face_point(n, m, [&](const Eigen::VectorXd& x) { top.offer(c.value(x), x); });

  // Projected gradient ascent with backtracking, at most 50 accepted steps.
  const double scale = std::sqrt(sigma.norm_sq());
  double best = top.items().front().first;
  for (const auto& [v0, x0] : top.items()) {
    Eigen::VectorXd x = x0;
    double f = v0;
    double step = 1.0 / scale;
    for (int it = 0; it < 50; ++it) {
      const Eigen::VectorXd g = 3.0 * c.gradient(x);
      const Eigen::VectorXd pg = g - g.dot(x) * x;
      if (pg.norm() < 1e-15 * scale) break;
      bool moved = false;
      for (int half = 0; half < 40; ++half) {
        const Eigen::VectorXd xn = (x + step * pg).normalized();
        const double fn = c.value(xn);
        if (fn > f) {
          x = xn;
          f = fn;
          step *= 2.0;
          moved = true;
          break;
        }
        step *= 0.5;
      }
      if (!moved) break;
    }
    best = std::max(best, f);
  }
  return best;
}

bool multiplicity_one(const SymCubic& sigma, const AdaptedSpectrum& spectrum, double tol) {
  const int n = sigma.dim();
  if (sigma.max_abs() == 0.0) return false;
  const DenseCubic c(sigma);

  TopK top(256);
  // Seeds below this value cannot be the grid point nearest to a maximizer:
  // the second derivative along great circles is bounded by 9 |sigma|_F and
  // geodesic distance is at most pi/2 times the chord.
  double floor_value = -std::numeric_limits<double>::infinity();
  if (n <= 4) {
    const int m = n == 2 ? 1024 : (n == 3 ? 64 : 16);
    for_each_face_point(n, m, [&](const Eigen::VectorXd& x) { top.offer(c.value(x), x); });
    const double d = 0.5 * std::numbers::pi * std::sqrt(n - 1.0) / m;
    floor_value = spectrum.theta - 4.5 * std::sqrt(sigma.norm_sq()) * d * d - tol;
  } else {
    std::mt19937_64 rng(0x6d756c74ULL);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd x(n);
    for (int k = 0; k < 50000; ++k) {
      for (int i = 0; i < n; ++i) x(i) = normal(rng);
      x.normalize();
      top.offer(c.value(x), x);
    }
  }

  // Greedy thinning so that seeds around one maximizer are refined once.
  std::vector<Eigen::VectorXd> seeds;
  for (const auto& [v, x] : top.items()) {
    if (v < floor_value) continue;
    bool near = false;
    for (const auto& s : seeds)
      if ((s - x).norm() < 0.02) {
        near = true;
        break;
      }
    if (!near) seeds.push_back(x);
  }

  const ShiftParams sp = shift_params(sigma);
  for (const auto& x0 : seeds) {
    const LocalMax r = ascend(c, x0, sp.alpha, sp.alpha_max, sp.scale, 2000, tol);
    if (r.value >= spectrum.theta - tol && (r.x - spectrum.e1).norm() > 10.0 * tol) return false;
  }
  return true;
}

SymCubic canonical3_tensor(double l1, double l2, double m1, double m2) {
  std::map<Index3, double> e{{{0, 0, 0}, l1 + l2}, {{0, 1, 1}, -l1}, {{0, 2, 2}, -l2},
                             {{1, 1, 1}, m1},      {{1, 1, 2}, m2},  {{1, 2, 2}, -m1},
                             {{2, 2, 2}, -m2}};
  return SymCubic::from_entries(3, e);
}

Canonical3 canonical3(const SymCubic& sigma, double tol_trace) {
  if (sigma.dim() != 3) throw DimensionError("canonical3: requires n = 3");
  const auto [slice, trace] = sigma.max_trace();
  if (std::abs(trace) > tol_trace) {
    std::ostringstream os;
    os << "canonical3: sigma is not traceless (slice " << slice + 1 << " has trace " << trace << ")";
    throw TraceError(os.str(), slice, trace);
  }

  Canonical3 out;
  if (sigma.max_abs() == 0.0) return out;

  const AdaptedSpectrum s = theta(sigma);
  // Start from e1 and any orthonormal completion, then rotate {e2, e3} by the
  // Jacobi angle that annihilates sigma(e1, e2, e3).
  const Eigen::Vector3d e1 = s.e1;
  const Eigen::MatrixXd q = complement_basis(s.e1);
  Eigen::Vector3d v2 = q.col(0), v3 = q.col(1);
  const Eigen::Matrix3d slice1 = cubic_slice(sigma, s.e1);
  const double p = v2.dot(slice1 * v2), r = v3.dot(slice1 * v3), b = v2.dot(slice1 * v3);
  const double phi = 0.5 * std::atan2(2.0 * b, p - r);
  Eigen::Vector3d w2 = std::cos(phi) * v2 + std::sin(phi) * v3;
  Eigen::Vector3d w3 = -std::sin(phi) * v2 + std::cos(phi) * v3;
  // Order so that sigma(e1,e2,e2) >= sigma(e1,e3,e3), i.e. lambda1 <= lambda2.
  if (w2.dot(slice1 * w2) < w3.dot(slice1 * w3)) std::swap(w2, w3);

  out.rotation.row(0) = e1.transpose();
  out.rotation.row(1) = w2.transpose();
  out.rotation.row(2) = w3.transpose();
  const SymCubic t = rotate(sigma, out.rotation);

  out.lambda1 = -t(0, 1, 1);
  out.lambda2 = -t(0, 2, 2);
  out.mu1 = t(1, 1, 1);
  out.mu2 = t(1, 1, 2);
  out.x = (out.lambda1 + out.lambda2) * (out.lambda1 + out.lambda2);
  out.y = (out.lambda1 - out.lambda2) * (out.lambda1 - out.lambda2);
  out.z = 4.0 * (out.mu1 * out.mu1 + out.mu2 * out.mu2);
  out.theta = s.theta;
  out.norm_sq = sigma.norm_sq();
  Eigen::Matrix3d g;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) g(i, j) = sigma.slice(i).cwiseProduct(sigma.slice(j)).sum();
  out.gram = g.squaredNorm();
  out.pattern_residual =
      max_abs_diff(t, canonical3_tensor(out.lambda1, out.lambda2, out.mu1, out.mu2));
  return out;
}

SymCubic reconstruct(const Canonical3& c) {
  const Eigen::MatrixXd back = c.rotation.transpose();
  return rotate(canonical3_tensor(c.lambda1, c.lambda2, c.mu1, c.mu2), back);
}

}  // namespace legpinch
