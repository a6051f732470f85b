// Command-line front end: state-evolution analyses, free-entropy
// landscapes, phase diagrams, solver runs and sweeps, and the validation
// suites. All data outputs are CSV with a JSON mirror; volatile run info
// goes to a .meta.json sidecar so data files are byte-reproducible.

#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pbigamp/harness.hpp"
#include "pbigamp/parallel.hpp"
#include "pbigamp/validate.hpp"

using namespace pbigamp;

namespace {

std::string join_args(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i) s += ' ';
    s += argv[i];
  }
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"low-rank matrix compressed sensing: P-BiG-AMP solver and "
               "replica state-evolution analysis"};
  app.require_subcommand(1);

  std::uint64_t seed = 1;
  int workers = 0;
  std::string out = "out";
  app.add_option("--seed", seed, "master seed")->capture_default_str();
  app.add_option("--workers", workers,
                 "worker threads (0 = PBIGAMP_WORKERS or hardware)");
  app.add_option("--out", out, "output path prefix")->capture_default_str();

  double rho = 0.1, alpha = 0.5, delta = 1e-12;
  std::string rho_grid, alpha_grid, m_grid;
  double informed_start = -1.0;
  std::string config_path;

  CLI::App* fp = app.add_subcommand("se-fixed-points",
                                    "fixed points of the scalar state "
                                    "evolution with stability and phase");
  fp->add_option("--rho", rho)->required();
  fp->add_option("--alpha", alpha)->required();
  fp->add_option("--delta", delta)->capture_default_str();

  CLI::App* pd = app.add_subcommand("phase-diagram",
                                    "phase labels over a (rho, alpha) grid "
                                    "plus bisected boundary curves");
  pd->add_option("--rho-grid", rho_grid, "list a,b,c or lo:hi:count")
      ->required();
  pd->add_option("--alpha-grid", alpha_grid, "list a,b,c or lo:hi:count")
      ->required();
  pd->add_option("--delta", delta)->capture_default_str();
  pd->add_option("--informed-start", informed_start,
                 "starting nMSE of the informed line");

  CLI::App* fe = app.add_subcommand("free-entropy",
                                    "free-entropy landscape over an m grid");
  fe->add_option("--rho", rho)->required();
  fe->add_option("--alpha", alpha)->required();
  fe->add_option("--delta", delta)->capture_default_str();
  fe->add_option("--m-grid", m_grid, "list a,b,c or lo:hi:count")->required();

  CLI::App* run = app.add_subcommand("amp-run", "solve one instance");
  run->add_option("--config", config_path, "JSON experiment config")
      ->required()
      ->check(CLI::ExistingFile);

  CLI::App* sweep = app.add_subcommand(
      "amp-sweep", "solver vs state-evolution sweep over a config grid");
  sweep->add_option("--config", config_path, "JSON experiment config")
      ->required()
      ->check(CLI::ExistingFile);

  CLI::App* val =
      app.add_subcommand("validate", "run the oracle-equivalence suites");

  CLI11_PARSE(app, argc, argv);
  const std::string command = join_args(argc, argv);

  try {
    if (fp->parsed()) {
      write_table(out, fixed_point_table(rho, alpha, delta));
      write_meta(out, command, seed);
    } else if (pd->parsed()) {
      ExperimentConfig cfg;
      cfg.rho_grid = parse_grid(rho_grid);
      cfg.alpha_grid = parse_grid(alpha_grid);
      cfg.delta = delta;
      cfg.seed = seed;
      cfg.workers = workers;
      if (informed_start > 0.0) cfg.informed_start = informed_start;
      const PhaseDiagramTables tables = phase_diagram_tables(cfg);
      write_table(out, tables.cells);
      write_table(out + "_boundaries", tables.boundaries);
      write_meta(out, command, seed);
    } else if (fe->parsed()) {
      write_table(out,
                  free_entropy_table(rho, alpha, delta, parse_grid(m_grid)));
      write_meta(out, command, seed);
    } else if (run->parsed() || sweep->parsed()) {
      ExperimentConfig cfg = parse_config_file(config_path);
      if (workers > 0) cfg.workers = workers;
      if (app.count("--seed")) cfg.seed = seed;
      if (app.count("--out")) cfg.out = out;
      if (run->parsed()) {
        const AmpRunOutput res = amp_run_experiment(cfg);
        write_table(cfg.out, res.summary);
        write_table(cfg.out + "_trajectory", res.trajectory);
      } else {
        write_table(cfg.out, amp_sweep(cfg));
      }
      write_meta(cfg.out, command, cfg.seed);
    } else if (val->parsed()) {
      bool ok = true;
      Table t;
      t.columns = {"suite", "status", "detail"};
      for (const ValidationResult& r : run_validation(seed)) {
        std::cout << (r.pass ? "PASS " : "FAIL ") << r.suite << " (" << r.detail
                  << ")\n";
        t.rows.push_back({r.suite, std::string(r.pass ? "pass" : "fail"),
                          r.detail});
        ok = ok && r.pass;
      }
      if (app.count("--out")) {
        write_table(out, t);
        write_meta(out, command, seed);
      }
      return ok ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
