#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pbigamp/priors_channels.hpp"

namespace pbigamp {

// measurement ratios alpha_u = L/(RM), alpha_v = L/(RP)
struct Alphas {
  double alpha_u = 1.0;
  double alpha_v = 1.0;
};

// Bayes-optimal order parameters (overlaps)
struct BoSeState {
  double m_u = 0.0;
  double m_v = 0.0;
  double m_hat = 0.0;
};

// general replica-symmetric order parameters, u and v sextets
struct RsSeState {
  double m_u = 0.0, q_u = 0.0, Q_u = 0.0;
  double mh_u = 0.0, qh_u = 0.0, Qh_u = 0.0;
  double m_v = 0.0, q_v = 0.0, Q_v = 0.0;
  double mh_v = 0.0, qh_v = 0.0, Qh_v = 0.0;
};

// symmetric case study: common sparsity rho, noise delta, global rate
// alpha = L/(2MR) = alpha_u/2
struct CaseStudyParams {
  double rho = 0.1;
  double delta = 1e-12;
  double alpha = 0.5;
};

struct SeModel {
  const Prior* prior_u0 = nullptr;
  const Prior* prior_u = nullptr;
  const Prior* prior_v0 = nullptr;
  const Prior* prior_v = nullptr;
  const Channel* channel0 = nullptr;
  const Channel* channel = nullptr;
  Alphas alphas;
};

struct InvalidStateError : std::runtime_error {
  explicit InvalidStateError(const std::string& what)
      : std::runtime_error(what) {}
};

enum class Stability { kStable, kUnstable, kMarginal };
enum class Phase { kEasy, kHard, kImpossible };

std::string to_string(Stability s);
std::string to_string(Phase p);

struct FixedPoint {
  double m = 0.0;
  double nmse = 1.0;
  Stability stability = Stability::kStable;
  bool basin_boundary = false;  // unstable interior points separate basins
};

struct FixedPointReport {
  std::vector<FixedPoint> points;  // sorted by m ascending, m = 0 included
  Phase phase = Phase::kImpossible;
};

// --- channel-level kernels -------------------------------------------------

// Bayes-optimal channel hat: single (t, y) integral of the squared
// t-derivative of f0^Y over f0^Y; closed form 1/(delta + Qz0 - mz) for AWGN.
double bo_channel_mhat(const Channel& channel, double mz, double Qz0,
                       double rel_tol = 1e-10);

struct ChannelHats {
  double m_hat = 0.0, q_hat = 0.0, Q_hat = 0.0;
};

// General (possibly mismatched) channel-level hat updates at
// m = m_u m_v, q = q_u q_v, Q = Q_u Q_v; AWGN pairs short-circuit to closed
// forms, other channels integrate over (t, y).
ChannelHats channel_hats(const Channel& channel0, const Channel& channel,
                         double m, double q, double Q, double Qz0,
                         double rel_tol = 1e-9);

// --- prior-level kernels ---------------------------------------------------

struct PriorUpdate {
  double m = 0.0, q = 0.0, Q = 0.0;
};

// Prior-side update of (m, q, Q) from the per-factor hats: single scalar
// integrals of f1^0 fhat, f0^0 fhat^2 and f0^0 fbar forms. Handles the
// degenerate mh -> 0 limit analytically (zero-mean prior, zero overlap).
PriorUpdate se_prior_update(const Prior& prior0, const Prior& prior,
                            double mh, double qh, double Qh,
                            double rel_tol = 1e-11);

// --- state evolution steps -------------------------------------------------

BoSeState bo_se_step(const BoSeState& s, const Prior& prior_u,
                     const Prior& prior_v, const Channel& channel,
                     const Alphas& alphas, double rel_tol = 1e-11);

RsSeState general_se_step(const RsSeState& s, const SeModel& model,
                          double rel_tol = 1e-11);

// the single scalar equation of the symmetric Bernoulli-Gauss / AWGN case;
// fixed_n > 0 switches to deterministic composite Simpson with fixed_n
// intervals per panel (noise-free in m, for root polishing)
double scalar_se_step(double m, const CaseStudyParams& p,
                      double rel_tol = 1e-11, int fixed_n = 0);

struct ScalarSeRun {
  double m_final = 0.0;
  int iterations = 0;
  bool converged = false;
};

// iterate scalar SE from m0 until |dm| < 1e-14 or max_iters; early exit once
// nMSE < 1e-12 (monotone below the unstable point, cannot reattach)
ScalarSeRun iterate_scalar_se(double m0, const CaseStudyParams& p,
                              int max_iters = 100000, double rel_tol = 1e-11);

BoSeState iterate_bo_se(const BoSeState& s0, const Prior& pu, const Prior& pv,
                        const Channel& ch, const Alphas& alphas,
                        int max_iters = 100000, double rel_tol = 1e-11);

// --- fixed points, stability, landscape, phases ----------------------------

FixedPointReport find_fixed_points(const CaseStudyParams& p,
                                   int grid_points = 10000);

Stability stability_at_zero(const CaseStudyParams& p);

// case-study free entropy; n is the per-panel Simpson refinement
double free_entropy(double m, const CaseStudyParams& p, int n = 8192);

// central-difference d phi/dm with step chosen on a ladder (the landscape
// gets extremely stiff near the recovery fixed point)
double free_entropy_slope(double m, const CaseStudyParams& p, int n = 16384);

struct PhaseCell {
  double rho, alpha;
  Phase phase;
  double uninformed_final_nmse = 1.0;
  double informed_final_nmse = -1.0;  // <0 when no informed run requested
};

struct PhaseBoundary {
  double rho;
  double alpha_possible = 0.0;    // low-nMSE fixed point appears
  double alpha_uninformed = 0.0;  // easy/hard from uninformed start
  double alpha_informed = -1.0;   // easy/hard from the informed start
};

struct PhaseDiagram {
  std::vector<PhaseCell> cells;
  std::vector<PhaseBoundary> boundaries;
};

// Phase label per grid cell plus per-rho boundary curves bisected in alpha
// to 1e-3. uninformed_m0 is the starting overlap of the asymptotic scan;
// informed_start, when given, is a starting nMSE for the informed line.
PhaseDiagram phase_diagram(const std::vector<double>& rho_grid,
                           const std::vector<double>& alpha_grid,
                           double delta,
                           std::optional<double> informed_start = {},
                           double uninformed_m0 = 1e-12, int workers = 1);

// does the low-nMSE fixed point exist at these parameters
bool low_fixed_point_exists(const CaseStudyParams& p);

// --- observables -----------------------------------------------------------

struct SeMse {
  double u, v, x;
};
SeMse se_to_mse(const BoSeState& s, double Qu0, double Qv0);
double se_to_nmse(double m, double rho);

}  // namespace pbigamp
