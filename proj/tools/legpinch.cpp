// Command-line driver: identity sweeps, theta of tensor files, catalog scans.
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "legpinch/cli_report.hpp"

int main(int argc, char** argv) {
  legpinch::RunConfig cfg;
  CLI::App app{"Pinching diagnostics for cubic forms of Legendrian immersions"};
  app.require_subcommand(1);
  // Subcommands inherit this; a bare -h would collide with --h (FD step).
  app.set_help_flag("--help", "Print this help message and exit");

  int n = 0;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--n", n, "Dimension")->check(CLI::PositiveNumber);
    sub->add_option("--seed", cfg.seed, "Seed for every random draw");
    sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", cfg.out, "Output file (default stdout)");
    sub->add_option("--tol-trace", cfg.tol.trace);
    sub->add_option("--tol-sym", cfg.tol.sym);
    sub->add_option("--tol-lagrange", cfg.tol.lagrange);
    sub->add_option("--tol-fd", cfg.tol.fd);
    sub->add_option("--tol-scan", cfg.tol.scan);
    sub->add_option("--tol-identity", cfg.tol.identity);
  };

  auto* ident = app.add_subcommand("identities", "Randomized identity and inequality sweeps");
  common(ident);
  ident->add_option("--samples", cfg.samples, "Samples per check")->check(CLI::PositiveNumber);

  auto* th = app.add_subcommand("theta", "Maximal cubic value and spectrum of tensor files");
  common(th);
  th->add_option("files", cfg.inputs, "Tensor files")->required();

  auto* scan = app.add_subcommand("scan", "Pointwise reports over a grid on a catalog immersion");
  common(scan);
  scan->add_option("name", cfg.inputs, "Catalog entry")->required()->expected(1);
  scan->add_option("--grid", cfg.grid, "Points per axis (one value or one per axis)")->delimiter(',');
  scan->add_option("--h", cfg.h, "Finite-difference step")->check(CLI::PositiveNumber);
  scan->add_option("--threads", cfg.threads, "Worker threads (0: LEGPINCH_THREADS or hardware)");

  auto* cat = app.add_subcommand("catalog", "List catalog entries and expected values");
  common(cat);
  cat->add_option("names", cfg.inputs, "Entries (default: all)");

  auto* rep = app.add_subcommand("report", "Aggregate prior JSON reports");
  common(rep);
  rep->add_option("files", cfg.inputs, "Report files")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  cfg.command = app.get_subcommands().front()->get_name();
  if (n > 0) cfg.n = n;
  return legpinch::run(cfg, std::cout, std::cerr);
}
