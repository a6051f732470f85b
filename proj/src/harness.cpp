#include "pbigamp/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "pbigamp/parallel.hpp"

namespace pbigamp {

using nlohmann::json;

std::vector<double> parse_grid(const std::string& spec) {
  std::vector<double> out;
  if (spec.find(':') != std::string::npos) {
    const auto c1 = spec.find(':');
    const auto c2 = spec.find(':', c1 + 1);
    if (c2 == std::string::npos)
      throw std::invalid_argument("grid spec must be lo:hi:count");
    const double lo = std::stod(spec.substr(0, c1));
    const double hi = std::stod(spec.substr(c1 + 1, c2 - c1 - 1));
    const int n = std::stoi(spec.substr(c2 + 1));
    if (n < 1) throw std::invalid_argument("grid count must be >= 1");
    for (int i = 0; i < n; ++i)
      out.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
    return out;
  }
  size_t pos = 0;
  while (pos < spec.size()) {
    const auto comma = spec.find(',', pos);
    const auto end = comma == std::string::npos ? spec.size() : comma;
    out.push_back(std::stod(spec.substr(pos, end - pos)));
    pos = end + 1;
  }
  if (out.empty()) throw std::invalid_argument("empty grid");
  return out;
}

namespace {

std::vector<double> grid_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>()};
  if (j.is_string()) return parse_grid(j.get<std::string>());
  if (j.is_array()) {
    std::vector<double> g;
    for (const auto& v : j) g.push_back(v.get<double>());
    return g;
  }
  if (j.is_object()) {
    const double lo = j.at("from").get<double>();
    const double hi = j.at("to").get<double>();
    const int n = j.at("count").get<int>();
    std::vector<double> g;
    for (int i = 0; i < n; ++i)
      g.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
    return g;
  }
  throw std::invalid_argument("bad grid value in config");
}

}  // namespace

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open config: " + path);
  json j;
  f >> j;

  ExperimentConfig cfg;
  cfg.kind = j.value("experiment", cfg.kind);
  if (j.contains("rho")) cfg.rho_grid = grid_from_json(j["rho"]);
  if (j.contains("alpha")) cfg.alpha_grid = grid_from_json(j["alpha"]);
  if (j.contains("m_grid")) cfg.m_grid = grid_from_json(j["m_grid"]);
  cfg.delta = j.value("delta", cfg.delta);
  cfg.M = j.value("M", cfg.M);
  cfg.P = j.value("P", cfg.P);
  cfg.R = j.value("R", cfg.R);
  cfg.instances = j.value("instances", cfg.instances);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.workers = j.value("workers", cfg.workers);
  cfg.out = j.value("out", cfg.out);
  if (j.contains("informed_start"))
    cfg.informed_start = j["informed_start"].get<double>();
  if (j.contains("assumed")) {
    const auto& a = j["assumed"];
    if (a.contains("rho")) cfg.rho_assumed = a["rho"].get<double>();
    if (a.contains("delta")) cfg.delta_assumed = a["delta"].get<double>();
  }
  if (j.contains("amp")) {
    const auto& a = j["amp"];
    cfg.amp.t_max = a.value("t_max", cfg.amp.t_max);
    cfg.amp.beta = a.value("beta", cfg.amp.beta);
    cfg.amp.tol = a.value("tol", cfg.amp.tol);
    cfg.amp.patience = a.value("patience", cfg.amp.patience);
    cfg.amp.restarts = a.value("restarts", cfg.amp.restarts);
    cfg.amp.success_threshold =
        a.value("success_threshold", cfg.amp.success_threshold);
    cfg.amp.variance_floor = a.value("variance_floor", cfg.amp.variance_floor);
    cfg.amp.threads = a.value("threads", cfg.amp.threads);
  }
  return cfg;
}

std::uint64_t point_seed(std::uint64_t master, int rho_idx, int alpha_idx,
                         int instance_idx) {
  return seed_mix(master, static_cast<std::uint64_t>(rho_idx),
                  static_cast<std::uint64_t>(alpha_idx),
                  static_cast<std::uint64_t>(instance_idx));
}

namespace {

InstanceParams instance_params(const ExperimentConfig& cfg, double rho,
                               double alpha, std::uint64_t seed) {
  InstanceParams p;
  p.M = cfg.M;
  p.P = cfg.P;
  p.R = cfg.R;
  p.alpha = alpha;
  p.rho_u0 = p.rho_v0 = rho;
  p.delta0 = cfg.delta;
  p.rho_u = p.rho_v = cfg.rho_assumed.value_or(rho);
  p.delta = cfg.delta_assumed.value_or(cfg.delta);
  p.seed = seed;
  return p;
}

struct SePrediction {
  double low = std::numeric_limits<double>::quiet_NaN();
  double high = std::numeric_limits<double>::quiet_NaN();
};

SePrediction se_prediction(double rho, double alpha, double delta) {
  const FixedPointReport report = find_fixed_points({rho, delta, alpha});
  SePrediction pred;
  for (const FixedPoint& fp : report.points) {
    if (fp.stability == Stability::kUnstable) continue;
    if (std::isnan(pred.low) || fp.nmse < pred.low) pred.low = fp.nmse;
    if (std::isnan(pred.high) || fp.nmse > pred.high) pred.high = fp.nmse;
  }
  return pred;
}

}  // namespace

Table amp_sweep(const ExperimentConfig& cfg) {
  const int workers = cfg.workers > 0 ? cfg.workers : default_workers();
  const int nr = static_cast<int>(cfg.rho_grid.size());
  const int na = static_cast<int>(cfg.alpha_grid.size());
  const int ni = cfg.instances;

  // SE fixed-point predictions once per grid point
  std::vector<SePrediction> preds(static_cast<std::size_t>(nr) * na);
  parallel_for(nr * na, workers, [&](int idx) {
    preds[idx] = se_prediction(cfg.rho_grid[idx / na],
                               cfg.alpha_grid[idx % na], cfg.delta);
  });

  struct RowData {
    double rho, alpha;
    std::uint64_t seed;
    int restarts_used, iterations;
    double final_nmse;
    bool success, diverged;
    SePrediction pred;
  };
  std::vector<RowData> rows(static_cast<std::size_t>(nr) * na * ni);

  AmpConfig amp = cfg.amp;
  if (amp.threads <= 0) amp.threads = workers > 1 ? 1 : default_workers();

  parallel_for(nr * na * ni, workers, [&](int idx) {
    const int ri = idx / (na * ni);
    const int ai = (idx / ni) % na;
    const int ii = idx % ni;
    const double rho = cfg.rho_grid[ri];
    const double alpha = cfg.alpha_grid[ai];
    const std::uint64_t seed = point_seed(cfg.seed, ri, ai, ii);

    const ProblemInstance inst =
        generate_instance(instance_params(cfg, rho, alpha, seed));
    AmpConfig local = amp;
    local.seed = seed_mix(seed, 0xA3u);
    const AmpResult res = amp_run(inst, local);

    RowData row;
    row.rho = rho;
    row.alpha = alpha;
    row.seed = seed;
    row.restarts_used = res.restarts_used;
    row.iterations = res.iterations;
    row.final_nmse = res.final_nmse;
    row.success = res.converged;
    row.diverged = res.all_diverged;
    row.pred = preds[static_cast<std::size_t>(ri) * na + ai];
    rows[idx] = row;
  });

  Table t;
  t.columns = {"rho",           "alpha",      "delta",      "M",
               "P",             "R",          "instance_seed",
               "restarts_used", "iterations", "final_nmse", "success",
               "se_low_nmse",   "se_high_nmse"};
  for (const RowData& r : rows) {
    t.rows.push_back({r.rho, r.alpha, cfg.delta,
                      static_cast<std::int64_t>(cfg.M),
                      static_cast<std::int64_t>(cfg.P),
                      static_cast<std::int64_t>(cfg.R),
                      static_cast<std::int64_t>(r.seed),
                      static_cast<std::int64_t>(r.restarts_used),
                      static_cast<std::int64_t>(r.iterations), r.final_nmse,
                      static_cast<std::int64_t>(r.success ? 1 : 0),
                      r.pred.low, r.pred.high});
  }
  return t;
}

AmpRunOutput amp_run_experiment(const ExperimentConfig& cfg) {
  const double rho = cfg.rho_grid.front();
  const double alpha = cfg.alpha_grid.front();
  const std::uint64_t seed = point_seed(cfg.seed, 0, 0, 0);
  const ProblemInstance inst =
      generate_instance(instance_params(cfg, rho, alpha, seed));
  AmpConfig amp = cfg.amp;
  if (amp.threads <= 0) amp.threads = default_workers();
  amp.seed = seed_mix(seed, 0xA3u);
  const AmpResult res = amp_run(inst, amp);

  AmpRunOutput out;
  out.summary.columns = {"rho",        "alpha",         "delta",
                         "M",          "P",             "R",
                         "L",          "instance_seed", "restarts_used",
                         "iterations", "best_restart",  "final_nmse",
                         "success",    "all_diverged"};
  out.summary.rows.push_back(
      {rho, alpha, cfg.delta, static_cast<std::int64_t>(cfg.M),
       static_cast<std::int64_t>(cfg.P), static_cast<std::int64_t>(cfg.R),
       static_cast<std::int64_t>(inst.L), static_cast<std::int64_t>(seed),
       static_cast<std::int64_t>(res.restarts_used),
       static_cast<std::int64_t>(res.iterations),
       static_cast<std::int64_t>(res.best_restart), res.final_nmse,
       static_cast<std::int64_t>(res.converged ? 1 : 0),
       static_cast<std::int64_t>(res.all_diverged ? 1 : 0)});

  out.trajectory.columns = {"t", "nmse_u", "nmse_v", "nmse", "residual"};
  for (const TrajectoryRow& r : res.trajectory)
    out.trajectory.rows.push_back({static_cast<std::int64_t>(r.t), r.nmse_u,
                                   r.nmse_v, r.nmse, r.residual});
  return out;
}

Table fixed_point_table(double rho, double alpha, double delta) {
  const FixedPointReport report = find_fixed_points({rho, delta, alpha});
  Table t;
  t.columns = {"rho", "alpha", "delta", "branch_id",
               "m",   "nmse",  "stability", "phase"};
  std::int64_t id = 0;
  for (const FixedPoint& fp : report.points)
    t.rows.push_back({rho, alpha, delta, id++, fp.m, fp.nmse,
                      to_string(fp.stability), to_string(report.phase)});
  return t;
}

PhaseDiagramTables phase_diagram_tables(const ExperimentConfig& cfg) {
  const int workers = cfg.workers > 0 ? cfg.workers : default_workers();
  const PhaseDiagram pd =
      phase_diagram(cfg.rho_grid, cfg.alpha_grid, cfg.delta,
                    cfg.informed_start, 1e-12, workers);
  PhaseDiagramTables out;
  out.cells.columns = {"rho", "alpha", "delta", "branch_id",
                       "m",   "nmse",  "stability", "phase"};
  for (const PhaseCell& c : pd.cells) {
    const double m = (1.0 - c.uninformed_final_nmse) * c.rho;
    out.cells.rows.push_back({c.rho, c.alpha, cfg.delta,
                              static_cast<std::int64_t>(-1), m,
                              c.uninformed_final_nmse, std::string(""),
                              to_string(c.phase)});
  }
  out.boundaries.columns = {"rho", "alpha_possible", "alpha_uninformed",
                            "alpha_informed"};
  for (const PhaseBoundary& b : pd.boundaries)
    out.boundaries.rows.push_back(
        {b.rho, b.alpha_possible, b.alpha_uninformed, b.alpha_informed});
  return out;
}

Table free_entropy_table(double rho, double alpha, double delta,
                         const std::vector<double>& m_grid) {
  const CaseStudyParams p{rho, delta, alpha};
  Table t;
  t.columns = {"rho", "alpha", "delta", "m", "nmse", "phi"};
  for (double m : m_grid)
    t.rows.push_back(
        {rho, alpha, delta, m, se_to_nmse(m, rho), free_entropy(m, p)});
  return t;
}

}  // namespace pbigamp
