#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pbigamp/io.hpp"
#include "pbigamp/solver.hpp"
#include "pbigamp/state_evolution.hpp"

namespace pbigamp {

struct ExperimentConfig {
  std::string kind = "amp-sweep";
  std::vector<double> rho_grid{0.1};
  std::vector<double> alpha_grid{0.5};
  std::vector<double> m_grid;
  double delta = 1e-12;
  int M = 200, P = 200, R = 1;
  int instances = 100;
  AmpConfig amp;  // amp.threads == 0 means auto
  std::optional<double> informed_start;
  std::optional<double> rho_assumed;    // mismatch knobs
  std::optional<double> delta_assumed;
  std::uint64_t seed = 1;
  int workers = 0;  // 0 -> default_workers()
  std::string out = "out";
};

// "a,b,c" or "lo:hi:count"
std::vector<double> parse_grid(const std::string& spec);

ExperimentConfig parse_config_file(const std::string& path);

// deterministic per-point seed; position-derived so sweeps are invariant
// to the worker count
std::uint64_t point_seed(std::uint64_t master, int rho_idx, int alpha_idx,
                         int instance_idx);

// One row per (grid point, instance): solver outcome next to the SE
// fixed-point predictions.
Table amp_sweep(const ExperimentConfig& cfg);

struct AmpRunOutput {
  Table summary;
  Table trajectory;
};
AmpRunOutput amp_run_experiment(const ExperimentConfig& cfg);

Table fixed_point_table(double rho, double alpha, double delta);

struct PhaseDiagramTables {
  Table cells;
  Table boundaries;
};
PhaseDiagramTables phase_diagram_tables(const ExperimentConfig& cfg);

Table free_entropy_table(double rho, double alpha, double delta,
                         const std::vector<double>& m_grid);

}  // namespace pbigamp
