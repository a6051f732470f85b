#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "pbigamp/instance.hpp"
#include "pbigamp/priors_channels.hpp"
#include "pbigamp/rng.hpp"

namespace pbigamp {

struct AmpConfig {
  int t_max = 2000;
  double beta = 0.3;          // damping of the posterior means
  double tol = 1e-9;          // stall threshold on the stopping metric
  int patience = 25;          // consecutive stalled iterations before stop
  int restarts = 20;
  double success_threshold = 1e-6;
  double variance_floor = 1e-12;
  std::uint64_t seed = 0;
  int threads = 1;
};

// All per-iteration arrays of the solver plus the previous-iteration copies
// and the cached operator maps of the current and previous iterates.
struct AmpState {
  int M = 0, P = 0, R = 0, L = 0, t = 0;
  std::vector<double> uhat, ubar, vhat, vbar;
  std::vector<double> uhat_prev, ubar_prev, vhat_prev, vbar_prev;
  std::vector<double> ghat, gbar, ghat_prev;
  std::vector<double> Zhat, Zbar;
  std::vector<double> Ufield, Vfield;  // damped denoiser input means
  std::vector<double> AUv, AU2vb, AVu, AV2ub;
  std::vector<double> AUv_prev, AU2vb_prev, AVu_prev, AV2ub_prev;
  bool fields_valid = false;
  bool maps_valid = false;
};

struct TrajectoryRow {
  int t;
  double nmse_u, nmse_v, nmse, residual;
};

struct AmpResult {
  std::vector<double> uhat, vhat;  // M x R, P x R
  std::vector<double> xhat;        // M x P
  std::vector<double> zhat;        // L
  std::vector<TrajectoryRow> trajectory;  // of the best restart
  int iterations = 0;
  int restarts_used = 0;
  int best_restart = 0;
  bool converged = false;     // reached success_threshold
  bool all_diverged = false;
  double final_nmse = 1.0;    // combined nMSE (ground truth) or X-change metric
};

struct DivergenceError : std::runtime_error {
  explicit DivergenceError(int t)
      : std::runtime_error("solver diverged at iteration " +
                           std::to_string(t)),
        iteration(t) {}
  int iteration;
};

struct UndefinedMetricError : std::runtime_error {
  UndefinedMetricError() : std::runtime_error("nMSE undefined for zero-norm input") {}
};

// Random initialization per the algorithm: posterior means sampled from the
// priors, variances set to the prior variance, ghat scaled standard normal.
AmpState amp_init(const ProblemInstance& inst, const Prior& prior_u,
                  const Prior& prior_v, const Channel& channel,
                  const AmpConfig& config, Rng& rng);

// One sweep of the iteration (all updates of one time index).
void amp_step(AmpState& state, const ProblemInstance& inst,
              const Prior& prior_u, const Prior& prior_v,
              const Channel& channel, const AmpConfig& config);

// Multi-restart driver; keeps the best run by final metric and stops
// restarting once success_threshold is reached.
AmpResult amp_run(const ProblemInstance& inst, const Prior& prior_u,
                  const Prior& prior_v, const Channel& channel,
                  const AmpConfig& config);

// Case-study convenience: Bernoulli-Gauss priors and AWGN channel built
// from the instance's assumed parameters.
AmpResult amp_run(const ProblemInstance& inst, const AmpConfig& config);

// 1 - |<u, uhat>| / (|u| |uhat|); scale-invariant, R = 1 only
double nmse(const std::vector<double>& u, const std::vector<double>& uhat);
double combined_nmse(const std::vector<double>& u,
                     const std::vector<double>& uh,
                     const std::vector<double>& v,
                     const std::vector<double>& vh);

struct MseTriple {
  double u, v, x;
};

// Frobenius mean squared errors with the MR / PR / LR normalizations.
MseTriple mse(const std::vector<double>& U, const std::vector<double>& Uh,
              const std::vector<double>& V, const std::vector<double>& Vh,
              const std::vector<double>& X, const std::vector<double>& Xh,
              int M, int P, int R, int L);

}  // namespace pbigamp
