#include "legpinch/cli_report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"
#include "legpinch/catalog.hpp"
#include "legpinch/cubic_spectrum.hpp"
#include "legpinch/errors.hpp"
#include "legpinch/pinching.hpp"
#include "legpinch/tensor_core.hpp"
#include "legpinch/tensor_io.hpp"

namespace legpinch {

namespace {

using nlohmann::json;

struct Failure {
  std::string check;
  std::string detail;
};

struct Outcome {
  json records = json::array();
  std::vector<Failure> failures;
  /// Column order for CSV output.
  std::vector<std::string> columns;

  void fail(std::string check, std::string detail) { failures.push_back({std::move(check), std::move(detail)}); }
};

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }
json opt(const std::optional<bool>& v) { return v ? json(*v) : json(nullptr); }

json vec(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json report_json(const PinchReport& r) {
  json j;
  j["n"] = r.n;
  j["norm_sq"] = r.norm_sq;
  j["theta"] = r.theta;
  j["beta"] = r.beta;
  j["mu"] = r.mu;
  j["gap_main"] = r.gap_main;
  j["gap_n3_quadratic"] = opt(r.gap_n3_quadratic);
  j["gap_thm2"] = opt(r.gap_thm2);
  j["gap_appendix"] = opt(r.gap_appendix);
  j["simons_gap"] = r.simons_gap;
  j["lagrange_residual"] = r.lagrange_residual;
  j["multiplicity_one"] = r.multiplicity_one;
  j["flags"] = {{"main", r.flags.main},
                {"n3_quadratic", opt(r.flags.n3_quadratic)},
                {"thm2", opt(r.flags.thm2)},
                {"appendix", opt(r.flags.appendix)}};
  j["violations"] = r.violations;
  return j;
}

const PinchReport kEmptyReport{};

json null_report() {
  json j = report_json(kEmptyReport);
  for (auto& [k, v] : j.items()) v = nullptr;
  return j;
}

std::string fmt(double v) { return format_double(v); }

// ---------------------------------------------------------------- identities

struct Worst {
  double value = 0.0;
  long count = 0;
  void add(double v) {
    ++count;
    if (!(v <= value)) value = std::isnan(v) ? INFINITY : v;
  }
};

void add_check(Outcome& o, const std::string& name, int n, long samples, double worst, double tol,
               const std::string& sense = "max_violation") {
  const bool pass = worst <= tol;
  o.records.push_back({{"check", name}, {"n", n}, {"samples", samples}, {"worst", worst}, {"tolerance", tol},
                       {"measure", sense}, {"pass", pass}});
  if (!pass) o.fail(name, "worst " + fmt(worst) + " exceeds " + fmt(tol) + " (n = " + std::to_string(n) + ")");
}

Outcome run_identities(const RunConfig& cfg) {
  const int n = cfg.n.value_or(3);
  if (n < 2) throw UsageError("identities needs --n >= 2");
  if (cfg.samples < 1) throw UsageError("--samples must be positive");
  const long s = cfg.samples;
  const Tolerances& tol = cfg.tol;
  Outcome o;
  o.columns = {"check", "n", "samples", "worst", "tolerance", "measure", "pass"};
  std::mt19937_64 rng(cfg.seed);

  // Simons inner product, algebraic curvature consistency, n = 3 Weyl identity.
  Worst simons, curvature, weyl;
  for (long k = 0; k < s; ++k) {
    const SymCubic sigma = random_traceless(n, rng);
    const Invariants inv = invariants(sigma);
    const SymCubic rhs = simons_rhs(sigma, tol.trace);
    simons.add(std::abs(inner(sigma, rhs) - ((n + 1) * inv.norm_sq - inv.gram - inv.comm)));
    const AlgCurvature c = algebraic_curvature(sigma, tol.trace);
    const double scale = std::max(1.0, inv.norm_sq);
    curvature.add(std::max({c.ricci_residual, c.symmetry_residual, c.bianchi_residual}) / scale);
    if (n == 3) {
      const double sq = inv.norm_sq * inv.norm_sq;
      weyl.add(std::abs(inv.comm - (4.0 * inv.gram - sq)) / std::max(1.0, sq));
    }
  }
  add_check(o, "simons_inner_product", n, s, simons.value, tol.identity);
  add_check(o, "algebraic_curvature", n, s, curvature.value, tol.sym);
  if (n == 3) add_check(o, "weyl_n3", n, s, weyl.value, tol.identity, "max_relative_violation");

  if (n == 3) {
    const double kappas[] = {1.4, 1.5, 2.0, 5.0};
    Worst kappa, lap_sphere, lap_nk;
    ThetaOptions topts;
    topts.seed = cfg.seed;
    for (long k = 0; k < s; ++k) {
      const SymCubic sigma = random_traceless(3, rng);
      const Canonical3 c = canonical3(sigma, tol.trace);
      for (double kp : kappas) kappa.add(-kappa_inequality_gap(c, kp));
      lap_sphere.add(-laplacian_lower_bound(c, Ambient::sphere4).slack);
      lap_nk.add(-laplacian_lower_bound(c, Ambient::nearly_kahler_15_4).slack);
    }
    add_check(o, "kappa_inequality", 3, s, kappa.value, tol.identity);
    add_check(o, "laplacian_bound_sphere", 3, s, lap_sphere.value, tol.identity);
    add_check(o, "laplacian_bound_nearly_kahler", 3, s, lap_nk.value, tol.identity);
  }

  if (n >= 3) {
    // Rejection sampling of admissible mu-vectors.
    Worst beta;
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> top(0.0, 4.0);
    long accepted = 0, drawn = 0;
    const long max_draws = 1000 * s + 1000;
    std::vector<double> mu(n);
    while (accepted < s && drawn < max_draws) {
      ++drawn;
      double sum = 0.0;
      for (double& m : mu) sum += (m = normal(rng));
      for (double& m : mu) m -= sum / n;
      std::swap(mu[0], *std::max_element(mu.begin(), mu.end()));
      if (!(mu[0] > 0.0)) continue;
      const double scale = top(rng) / mu[0];
      for (double& m : mu) m *= scale;
      if (!(mu[0] > 0.0) || mu[0] < 2.0 * *std::max_element(mu.begin() + 1, mu.end())) continue;
      const BetaChain b = beta_chain_check(mu, n);
      if (b.stationarity > 0.0) continue;
      ++accepted;
      beta.add((n + 2) / std::sqrt(double(n)) * mu[0] - b.beta);
    }
    add_check(o, "beta_chain", n, accepted, beta.value, tol.identity);
    if (accepted < s) o.fail("beta_chain", "only " + std::to_string(accepted) + " admissible samples drawn");

    Worst newton;
    std::exponential_distribution<double> expo;
    std::vector<double> a(n - 1);
    for (long k = 0; k < s; ++k) {
      double mx = 0.0;
      for (double& v : a) mx = std::max(mx, v = expo(rng));
      newton.add(-newton_gap(a) / std::max(1.0, mx * mx * mx));
    }
    add_check(o, "newton_inequality", n, s, newton.value, 1e-12);
  }
  return o;
}

// ---------------------------------------------------------------- theta

Outcome run_theta(const RunConfig& cfg) {
  if (cfg.inputs.empty()) throw UsageError("theta needs at least one tensor file");
  Outcome o;
  o.columns = {"file", "n", "theta", "norm_sq", "lagrange_residual", "multiplicity_one", "mu", "e1", "error"};
  ThetaOptions topts;
  topts.seed = cfg.seed;
  topts.tol = cfg.tol.lagrange;
  for (const auto& path : cfg.inputs) {
    SymCubic sigma(2);
    try {
      sigma = read_tensor_file(path);
    } catch (const Error& e) {
      throw UsageError(path + ": " + e.what());
    }
    if (cfg.n && *cfg.n != sigma.dim())
      throw UsageError(path + ": dimension " + std::to_string(sigma.dim()) + " does not match --n");
    json r{{"file", path}, {"n", sigma.dim()}, {"norm_sq", sigma.norm_sq()}, {"error", nullptr}};
    try {
      const AdaptedSpectrum sp = theta(sigma, topts);
      r["theta"] = sp.theta;
      r["e1"] = vec(sp.e1);
      r["mu"] = vec(sp.mu);
      r["lagrange_residual"] = sp.lagrange_residual;
      r["multiplicity_one"] = sp.multiplicity_one;
      if (sp.lagrange_residual > cfg.tol.lagrange)
        o.fail("lagrange_residual", path + ": " + fmt(sp.lagrange_residual));
      if (sigma.is_traceless(cfg.tol.trace)) {
        PinchOptions popts;
        popts.tol_trace = cfg.tol.trace;
        popts.theta = topts;
        const PinchReport rep = pinching_report(sigma, popts);
        r["report"] = report_json(rep);
        for (const auto& v : rep.violations) o.fail("pinching_report", path + ": " + v);
      } else {
        r["report"] = nullptr;
      }
    } catch (const Error& e) {
      r["error"] = e.what();
      o.fail("theta", path + ": " + e.what());
    }
    o.records.push_back(std::move(r));
  }
  return o;
}

// ---------------------------------------------------------------- scan

std::vector<int> scan_grid(const RunConfig& cfg, int n) {
  if (!cfg.grid.empty()) {
    if (cfg.grid.size() != 1 && static_cast<int>(cfg.grid.size()) != n)
      throw UsageError("--grid needs 1 or " + std::to_string(n) + " values");
    for (int g : cfg.grid)
      if (g < 1) throw UsageError("--grid values must be positive");
    return cfg.grid.size() == 1 ? std::vector<int>(n, cfg.grid[0]) : cfg.grid;
  }
  const int r = std::max(2, static_cast<int>(std::floor(std::pow(512.0, 1.0 / n) + 1e-9)));
  return std::vector<int>(n, r);
}

Outcome run_scan(const RunConfig& cfg) {
  if (cfg.inputs.size() != 1) throw UsageError("scan needs exactly one catalog name");
  CatalogEntry entry = [&] {
    try {
      return catalog_entry(cfg.inputs[0]);
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
  }();
  if (cfg.n && *cfg.n != entry.immersion.n) throw UsageError("--n does not match the catalog entry");
  if (!(cfg.h > 0.0)) throw UsageError("--h must be positive");

  ScanOptions so;
  so.jet.h = cfg.h;
  so.tol_trace = cfg.tol.fd;
  so.pinch.theta.seed = cfg.seed;
  so.pinch.theta.tol = cfg.tol.lagrange;
  so.threads = cfg.threads;
  const GridSpec grid{scan_grid(cfg, entry.immersion.n)};
  const auto recs = field_scan(entry.immersion, grid, so);

  Outcome o;
  o.columns = {"index", "u", "legendrian_residual", "mean_curvature", "symmetry_residual", "norm_sq", "theta",
               "beta", "gap_main", "gap_n3_quadratic", "gap_thm2", "gap_appendix", "simons_gap",
               "lagrange_residual", "multiplicity_one", "mu", "error"};
  const Expected& ex = entry.expected;
  const double tol = cfg.tol.scan;
  double max_leg = 0.0;
  long errors = 0;
  for (const auto& r : recs) {
    json j{{"index", r.index},
           {"u", vec(r.u)},
           {"legendrian_residual", r.legendrian_residual},
           {"mean_curvature", r.mean_curvature},
           {"symmetry_residual", r.symmetry_residual},
           {"error", r.error.empty() ? json(nullptr) : json(r.error)}};
    json rep = r.report ? report_json(*r.report) : null_report();
    for (auto& [k, v] : rep.items()) j[k] = v;
    o.records.push_back(std::move(j));
    max_leg = std::max(max_leg, r.legendrian_residual);

    if (!ex.legendrian) continue;
    const std::string at = "point " + std::to_string(r.index);
    if (!r.error.empty()) {
      ++errors;
      o.fail("point_error", at + ": " + r.error);
      continue;
    }
    if (r.legendrian_residual > cfg.tol.fd) o.fail("legendrian", at + ": " + fmt(r.legendrian_residual));
    if (r.symmetry_residual > 10.0 * cfg.tol.fd) o.fail("sigma_symmetry", at + ": " + fmt(r.symmetry_residual));
    if (ex.minimal.value_or(false) && r.mean_curvature > tol)
      o.fail("mean_curvature", at + ": " + fmt(r.mean_curvature));
    const PinchReport& p = *r.report;
    if (ex.norm_sq && std::abs(p.norm_sq - *ex.norm_sq) > tol)
      o.fail("norm_sq", at + ": " + fmt(p.norm_sq) + " vs " + fmt(*ex.norm_sq));
    if (ex.theta && std::abs(p.theta - *ex.theta) > tol)
      o.fail("theta", at + ": " + fmt(p.theta) + " vs " + fmt(*ex.theta));
    if (p.gap_main < -tol) o.fail("gap_main", at + ": " + fmt(p.gap_main));
    for (const auto& v : p.violations) o.fail("pinching_report", at + ": " + v);
  }
  if (!ex.legendrian && !(max_leg >= 0.1))
    o.fail("negative_control", "Legendrian residual never reached 0.1 (max " + fmt(max_leg) + ")");
  (void)errors;
  return o;
}

// ---------------------------------------------------------------- catalog

Outcome run_catalog(const RunConfig& cfg) {
  Outcome o;
  o.columns = {"name", "n", "ambient_n", "norm_sq", "theta", "mu", "minimal", "legendrian"};
  std::vector<std::string> names = cfg.inputs.empty() ? catalog_names() : cfg.inputs;
  for (const auto& name : names) {
    CatalogEntry e = [&] {
      try {
        return catalog_entry(name);
      } catch (const Error& err) {
        throw UsageError(err.what());
      }
    }();
    const Expected& ex = e.expected;
    json j{{"name", e.name},
           {"n", e.immersion.n},
           {"ambient_n", e.immersion.ambient_n},
           {"norm_sq", opt(ex.norm_sq)},
           {"theta", opt(ex.theta)},
           {"mu", ex.mu},
           {"minimal", opt(ex.minimal)},
           {"legendrian", ex.legendrian},
           {"witness", vec(e.witness)}};
    if (e.closed_form_sigma) {
      const SymCubic& s = *e.closed_form_sigma;
      const double trace = std::abs(s.max_trace().second);
      const double rhs = simons_rhs(s, cfg.tol.trace).max_abs();
      const double nsq = ex.norm_sq ? std::abs(s.norm_sq() - *ex.norm_sq) : 0.0;
      const double n = s.dim();
      const double eq = (ex.theta && ex.norm_sq) ? std::abs((n + 2) / std::sqrt(n) * *ex.theta - *ex.norm_sq) : 0.0;
      j["closed_form"] = {{"max_trace", trace}, {"simons_rhs_max", rhs}, {"norm_sq_error", nsq}, {"equality_error", eq}};
      if (trace > cfg.tol.trace) o.fail("closed_form_trace", e.name + ": " + fmt(trace));
      if (rhs > cfg.tol.sym) o.fail("closed_form_simons", e.name + ": " + fmt(rhs));
      if (nsq > cfg.tol.sym) o.fail("closed_form_norm", e.name + ": " + fmt(nsq));
      if (eq > cfg.tol.sym) o.fail("closed_form_equality", e.name + ": " + fmt(eq));
    } else {
      j["closed_form"] = nullptr;
    }
    if (ex.theta && !ex.mu.empty() && ex.mu[0] != *ex.theta) o.fail("expected_theta", e.name);
    o.records.push_back(std::move(j));
  }
  return o;
}

// ---------------------------------------------------------------- report

Outcome run_report(const RunConfig& cfg) {
  if (cfg.inputs.empty()) throw UsageError("report needs at least one JSON file");
  Outcome o;
  o.columns = {"file", "command", "pass", "records", "failures"};
  for (const auto& path : cfg.inputs) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open " + path);
    json doc;
    try {
      doc = json::parse(in);
    } catch (const json::exception& e) {
      throw UsageError(path + ": " + e.what());
    }
    if (!doc.is_object() || !doc.contains("summary") || !doc.contains("records") || !doc.contains("config"))
      throw UsageError(path + ": not a report");
    const bool pass = doc["summary"].value("pass", false);
    const auto& fails = doc["summary"]["failures"];
    o.records.push_back({{"file", path},
                         {"command", doc["config"].value("command", "")},
                         {"pass", pass},
                         {"records", doc["records"].size()},
                         {"failures", fails.size()}});
    if (!pass) {
      if (fails.empty()) o.fail("report", path + ": marked failing");
      for (const auto& f : fails) o.fail(f.value("check", "?"), path + ": " + f.value("detail", ""));
    }
  }
  return o;
}

// ---------------------------------------------------------------- output

std::string csv_cell(const json& v) {
  std::string s;
  if (v.is_null()) return "";
  if (v.is_number_float()) return fmt(v.get<double>());
  if (v.is_string()) {
    s = v.get<std::string>();
  } else if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + csv_cell(v[i]);
  } else {
    s = v.dump();
  }
  if (s.find_first_of(",\"\n") != std::string::npos) {
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  }
  return s;
}

void write_csv(std::ostream& os, const Outcome& o) {
  for (std::size_t i = 0; i < o.columns.size(); ++i) os << (i ? "," : "") << o.columns[i];
  os << '\n';
  for (const auto& r : o.records) {
    for (std::size_t i = 0; i < o.columns.size(); ++i)
      os << (i ? "," : "") << (r.contains(o.columns[i]) ? csv_cell(r[o.columns[i]]) : "");
    os << '\n';
  }
}

json config_json(const RunConfig& c) {
  return {{"command", c.command},
          {"inputs", c.inputs},
          {"n", c.n ? json(*c.n) : json(nullptr)},
          {"seed", c.seed},
          {"samples", c.samples},
          {"grid", c.grid},
          {"h", c.h},
          {"tolerances",
           {{"trace", c.tol.trace},
            {"sym", c.tol.sym},
            {"lagrange", c.tol.lagrange},
            {"fd", c.tol.fd},
            {"scan", c.tol.scan},
            {"identity", c.tol.identity}}},
          {"format", c.format}};
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  Outcome o;
  try {
    if (config.format != "json" && config.format != "csv") throw UsageError("--format must be json or csv");
    if (config.command == "identities")
      o = run_identities(config);
    else if (config.command == "theta")
      o = run_theta(config);
    else if (config.command == "scan")
      o = run_scan(config);
    else if (config.command == "catalog")
      o = run_catalog(config);
    else if (config.command == "report")
      o = run_report(config);
    else
      throw UsageError("unknown command '" + config.command + "'");
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  std::ostringstream body;
  if (config.format == "csv") {
    write_csv(body, o);
  } else {
    json failures = json::array();
    for (const auto& f : o.failures) failures.push_back({{"check", f.check}, {"detail", f.detail}});
    json doc{{"version", kReportVersion},
             {"config", config_json(config)},
             {"records", std::move(o.records)},
             {"summary", {{"pass", o.failures.empty()}, {"failures", std::move(failures)}}}};
    body << doc.dump(2) << '\n';
  }

  if (config.out.empty()) {
    out << body.str();
  } else {
    std::ofstream f(config.out, std::ios::binary);
    if (!f) {
      err << "error: cannot write " << config.out << '\n';
      return 2;
    }
    f << body.str();
  }
  for (const auto& f : o.failures) err << "FAIL " << f.check << ": " << f.detail << '\n';
  return o.failures.empty() ? 0 : 1;
}

}  // namespace legpinch
