#include "pbigamp/solver.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace pbigamp {

namespace {

constexpr double kVarCap = 1e12;

bool all_finite(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

// nMSE that maps degenerate inputs to 1 (no overlap) instead of throwing;
// used for trajectories where zero-norm iterates are a legitimate state
double nmse_guarded(const double* u, const double* uh, int n) {
  double dot = 0.0, nu = 0.0, nh = 0.0;
  for (int i = 0; i < n; ++i) {
    dot += u[i] * uh[i];
    nu += u[i] * u[i];
    nh += uh[i] * uh[i];
  }
  if (nu <= 0.0 || nh <= 0.0) return 1.0;
  const double v = 1.0 - std::abs(dot) / std::sqrt(nu * nh);
  return std::min(std::max(v, 0.0), 1.0);
}

void outer_product(const std::vector<double>& U, const std::vector<double>& V,
                   int M, int P, int R, std::vector<double>& X) {
  X.assign(static_cast<std::size_t>(M) * P, 0.0);
  for (int mu = 0; mu < M; ++mu)
    for (int r = 0; r < R; ++r) {
      const double u = U[mu * R + r];
      if (u == 0.0) continue;
      double* row = X.data() + static_cast<std::size_t>(mu) * P;
      for (int p = 0; p < P; ++p) row[p] += u * V[p * R + r];
    }
}

}  // namespace

AmpState amp_init(const ProblemInstance& inst, const Prior& prior_u,
                  const Prior& prior_v, const Channel& channel,
                  const AmpConfig& config, Rng& rng) {
  AmpState st;
  st.M = inst.params.M;
  st.P = inst.params.P;
  st.R = inst.params.R;
  st.L = inst.L;
  const int nu = st.M * st.R, nv = st.P * st.R;
  const double floor = config.variance_floor;

  st.uhat.resize(nu);
  sample_prior(prior_u, st.uhat.data(), nu, rng);
  st.vhat.resize(nv);
  sample_prior(prior_v, st.vhat.data(), nv, rng);
  st.ubar.assign(nu, std::max(prior_u.second_moment(), floor));
  st.vbar.assign(nv, std::max(prior_v.second_moment(), floor));

  const double q0 = prior_u.second_moment() * prior_v.second_moment();
  const double gscale = 1.0 / channel.y_spread(q0);
  st.ghat.resize(st.L);
  for (int l = 0; l < st.L; ++l) st.ghat[l] = gscale * rng.gaussian();

  st.uhat_prev = st.uhat;
  st.ubar_prev = st.ubar;
  st.vhat_prev = st.vhat;
  st.vbar_prev = st.vbar;
  st.ghat_prev = st.ghat;
  st.gbar.assign(st.L, 0.0);
  st.Zhat.assign(st.L, 0.0);
  st.Zbar.assign(st.L, 0.0);

  const std::size_t mu_sz = static_cast<std::size_t>(st.L) * st.M * st.R;
  const std::size_t pv_sz = static_cast<std::size_t>(st.L) * st.P * st.R;
  st.AUv.resize(mu_sz);
  st.AU2vb.resize(mu_sz);
  st.AUv_prev.resize(mu_sz);
  st.AU2vb_prev.resize(mu_sz);
  st.AVu.resize(pv_sz);
  st.AV2ub.resize(pv_sz);
  st.AVu_prev.resize(pv_sz);
  st.AV2ub_prev.resize(pv_sz);
  st.maps_valid = false;
  st.t = 0;
  return st;
}

void amp_step(AmpState& st, const ProblemInstance& inst, const Prior& prior_u,
              const Prior& prior_v, const Channel& channel,
              const AmpConfig& config) {
  const int M = st.M, P = st.P, R = st.R, L = st.L;
  const int nu = M * R, nv = P * R;
  const int nt = config.threads;
  const double floor = config.variance_floor;
  const double beta = config.beta;

  inst.op.fused_maps(st.vhat.data(), st.vbar.data(), st.uhat.data(),
                     st.ubar.data(), R, st.AUv.data(), st.AU2vb.data(),
                     st.AVu.data(), st.AV2ub.data(), nt);
  if (!st.maps_valid) {
    // first iteration: the previous iterate equals the current one
    st.AUv_prev = st.AUv;
    st.AU2vb_prev = st.AU2vb;
    st.AVu_prev = st.AVu;
    st.AV2ub_prev = st.AV2ub;
    st.maps_valid = true;
  }

  std::vector<double> uhat_sq(nu), vsum(nv);
  for (int i = 0; i < nu; ++i) uhat_sq[i] = st.uhat[i] * st.uhat[i];
  for (int i = 0; i < nv; ++i)
    vsum[i] = st.vbar[i] + st.vhat[i] * st.vhat[i];

#pragma omp parallel for schedule(static) num_threads(nt) if (nt > 1)
  for (int l = 0; l < L; ++l) {
    const double* au = st.AUv.data() + static_cast<std::size_t>(l) * nu;
    const double* au2 = st.AU2vb.data() + static_cast<std::size_t>(l) * nu;
    const double* aup = st.AUv_prev.data() + static_cast<std::size_t>(l) * nu;
    const double* av = st.AVu.data() + static_cast<std::size_t>(l) * nv;
    const double* av2 = st.AV2ub.data() + static_cast<std::size_t>(l) * nv;
    const double* avp = st.AVu_prev.data() + static_cast<std::size_t>(l) * nv;
    double zh = 0.0, zb = 0.0, ons = 0.0;
    for (int i = 0; i < nu; ++i) {
      zh += st.uhat[i] * au[i];
      zb += uhat_sq[i] * au2[i];
      ons += st.ubar[i] * au[i] * aup[i];
    }
    for (int i = 0; i < nv; ++i) {
      zb += vsum[i] * av2[i];
      ons += st.vbar[i] * av[i] * avp[i];
    }
    st.Zhat[l] = zh - st.ghat[l] * ons;
    st.Zbar[l] = std::max(zb, floor);
  }

  std::vector<double> ghat_new(L), gbar_new(L);
  channel.correct_batch(inst.Y.data(), st.Zhat.data(), st.Zbar.data(),
                        ghat_new.data(), gbar_new.data(), L, nt);

  // field accumulators; the l loop stays serial so the summation order is
  // independent of the thread count
  std::vector<double> S1(nu, 0.0), S2(nu, 0.0), S3(nu, 0.0), S4(nu, 0.0),
      S5(nu, 0.0);
  std::vector<double> T1(nv, 0.0), T2(nv, 0.0), T3(nv, 0.0), T4(nv, 0.0),
      T5(nv, 0.0);
  for (int l = 0; l < L; ++l) {
    const double ghn = ghat_new[l], gbn = gbar_new[l], gho = st.ghat[l];
    const double gh2 = ghn * ghn, gg = ghn * gho;
    const double* au = st.AUv.data() + static_cast<std::size_t>(l) * nu;
    const double* au2 = st.AU2vb.data() + static_cast<std::size_t>(l) * nu;
    const double* au2p =
        st.AU2vb_prev.data() + static_cast<std::size_t>(l) * nu;
    for (int i = 0; i < nu; ++i) {
      S1[i] += au[i] * ghn;
      S2[i] += au[i] * au[i] * gbn;
      S3[i] += au2[i] * gbn;
      S4[i] += au2[i] * gh2;
      S5[i] += au2p[i] * gg;
    }
    const double* av = st.AVu.data() + static_cast<std::size_t>(l) * nv;
    const double* av2 = st.AV2ub.data() + static_cast<std::size_t>(l) * nv;
    const double* av2p =
        st.AV2ub_prev.data() + static_cast<std::size_t>(l) * nv;
    for (int i = 0; i < nv; ++i) {
      T1[i] += av[i] * ghn;
      T2[i] += av[i] * av[i] * gbn;
      T3[i] += av2[i] * gbn;
      T4[i] += av2[i] * gh2;
      T5[i] += av2p[i] * gg;
    }
  }

  std::vector<double> Uhat(nu), Ubar(nu), Vhat(nv), Vbar(nv);
  for (int i = 0; i < nu; ++i) {
    double d = S2[i] + S3[i] + S4[i];
    d = std::min(d, -1.0 / kVarCap);
    Ubar[i] = std::max(-1.0 / d, floor);
    Uhat[i] =
        Ubar[i] * (S1[i] - st.uhat[i] * S2[i] - st.uhat_prev[i] * S5[i]);
  }
  for (int i = 0; i < nv; ++i) {
    double d = T2[i] + T3[i] + T4[i];
    d = std::min(d, -1.0 / kVarCap);
    Vbar[i] = std::max(-1.0 / d, floor);
    Vhat[i] =
        Vbar[i] * (T1[i] - st.vhat[i] * T2[i] - st.vhat_prev[i] * T5[i]);
  }

  // simple damping, applied right after the field means are formed so both
  // the posterior means and the posterior variances inherit the smoothing
  if (st.fields_valid) {
    for (int i = 0; i < nu; ++i)
      Uhat[i] = beta * Uhat[i] + (1.0 - beta) * st.Ufield[i];
    for (int i = 0; i < nv; ++i)
      Vhat[i] = beta * Vhat[i] + (1.0 - beta) * st.Vfield[i];
  }
  st.Ufield = Uhat;
  st.Vfield = Vhat;
  st.fields_valid = true;

  std::vector<double> uhat_next(nu), ubar_next(nu), vhat_next(nv),
      vbar_next(nv);
  prior_u.denoise_batch(Uhat.data(), Ubar.data(), uhat_next.data(),
                        ubar_next.data(), nu, nt);
  prior_v.denoise_batch(Vhat.data(), Vbar.data(), vhat_next.data(),
                        vbar_next.data(), nv, nt);
  for (int i = 0; i < nu; ++i) ubar_next[i] = std::max(ubar_next[i], floor);
  for (int i = 0; i < nv; ++i) vbar_next[i] = std::max(vbar_next[i], floor);

  if (!all_finite(uhat_next) || !all_finite(ubar_next) ||
      !all_finite(vhat_next) || !all_finite(vbar_next) ||
      !all_finite(st.Zhat) || !all_finite(ghat_new) || !all_finite(gbar_new))
    throw DivergenceError(st.t);

  std::swap(st.uhat_prev, st.uhat);
  st.uhat = std::move(uhat_next);
  std::swap(st.ubar_prev, st.ubar);
  st.ubar = std::move(ubar_next);
  std::swap(st.vhat_prev, st.vhat);
  st.vhat = std::move(vhat_next);
  std::swap(st.vbar_prev, st.vbar);
  st.vbar = std::move(vbar_next);
  std::swap(st.ghat_prev, st.ghat);
  st.ghat = std::move(ghat_new);
  st.gbar = std::move(gbar_new);
  std::swap(st.AUv_prev, st.AUv);
  std::swap(st.AU2vb_prev, st.AU2vb);
  std::swap(st.AVu_prev, st.AVu);
  std::swap(st.AV2ub_prev, st.AV2ub);
  ++st.t;
}

AmpResult amp_run(const ProblemInstance& inst, const Prior& prior_u,
                  const Prior& prior_v, const Channel& channel,
                  const AmpConfig& config) {
  AmpResult best;
  best.final_nmse = std::numeric_limits<double>::quiet_NaN();
  const bool use_truth = inst.has_truth && inst.params.R == 1;
  bool any_finished = false;

  std::vector<double> xcur, xprev;
  for (int r = 0; r < config.restarts; ++r) {
    Rng rng(seed_mix(config.seed, 0x1717u, static_cast<std::uint64_t>(r)));
    AmpState st = amp_init(inst, prior_u, prior_v, channel, config, rng);
    std::vector<TrajectoryRow> traj;
    double metric = 1.0;
    bool diverged = false;
    int iters = 0;
    double last_metric = std::numeric_limits<double>::infinity();
    int streak = 0;
    if (!use_truth) outer_product(st.uhat, st.vhat, st.M, st.P, st.R, xprev);

    try {
      for (int t = 0; t < config.t_max; ++t) {
        amp_step(st, inst, prior_u, prior_v, channel, config);
        iters = t + 1;
        double residual = 0.0;
        {
          double num = 0.0, den = 0.0;
          for (int l = 0; l < st.L; ++l) {
            const double d = inst.Y[l] - st.Zhat[l];
            num += d * d;
            den += inst.Y[l] * inst.Y[l];
          }
          residual = den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
        }
        if (use_truth) {
          const double nu =
              nmse_guarded(inst.U.data(), st.uhat.data(), st.M * st.R);
          const double nv =
              nmse_guarded(inst.V.data(), st.vhat.data(), st.P * st.R);
          metric = 0.5 * (nu + nv);
          traj.push_back({st.t, nu, nv, metric, residual});
        } else {
          outer_product(st.uhat, st.vhat, st.M, st.P, st.R, xcur);
          double num = 0.0, den = 0.0;
          for (std::size_t i = 0; i < xcur.size(); ++i) {
            const double d = xcur[i] - xprev[i];
            num += d * d;
            den += xcur[i] * xcur[i];
          }
          metric = den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
          std::swap(xcur, xprev);
          traj.push_back({st.t, -1.0, -1.0, metric, residual});
        }
        if (std::abs(metric - last_metric) < config.tol) {
          if (++streak >= config.patience) break;
        } else {
          streak = 0;
        }
        last_metric = metric;
      }
    } catch (const DivergenceError&) {
      diverged = true;
    }

    best.restarts_used = r + 1;
    if (!diverged) {
      if (!any_finished || metric < best.final_nmse) {
        best.final_nmse = metric;
        best.best_restart = r;
        best.iterations = iters;
        best.uhat = st.uhat;
        best.vhat = st.vhat;
        best.zhat = st.Zhat;
        best.trajectory = std::move(traj);
        outer_product(best.uhat, best.vhat, st.M, st.P, st.R, best.xhat);
      }
      any_finished = true;
      if (best.final_nmse <= config.success_threshold) break;
    }
  }

  best.all_diverged = !any_finished;
  best.converged =
      any_finished && best.final_nmse <= config.success_threshold;
  return best;
}

AmpResult amp_run(const ProblemInstance& inst, const AmpConfig& config) {
  const BernoulliGaussPrior pu(inst.params.rho_u), pv(inst.params.rho_v);
  const AwgnChannel channel(inst.params.delta);
  return amp_run(inst, pu, pv, channel, config);
}

double nmse(const std::vector<double>& u, const std::vector<double>& uh) {
  double dot = 0.0, nu = 0.0, nh = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * uh[i];
    nu += u[i] * u[i];
    nh += uh[i] * uh[i];
  }
  if (nu <= 0.0 || nh <= 0.0) throw UndefinedMetricError();
  const double v = 1.0 - std::abs(dot) / std::sqrt(nu * nh);
  return std::min(std::max(v, 0.0), 1.0);
}

double combined_nmse(const std::vector<double>& u,
                     const std::vector<double>& uh,
                     const std::vector<double>& v,
                     const std::vector<double>& vh) {
  return 0.5 * (nmse(u, uh) + nmse(v, vh));
}

MseTriple mse(const std::vector<double>& U, const std::vector<double>& Uh,
              const std::vector<double>& V, const std::vector<double>& Vh,
              const std::vector<double>& X, const std::vector<double>& Xh,
              int M, int P, int R, int L) {
  if (U.size() != Uh.size() || V.size() != Vh.size() || X.size() != Xh.size())
    throw std::invalid_argument("mse: dimension mismatch");
  auto frob2 = [](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double d = a[i] - b[i];
      s += d * d;
    }
    return s;
  };
  return {frob2(U, Uh) / (static_cast<double>(M) * R),
          frob2(V, Vh) / (static_cast<double>(P) * R),
          frob2(X, Xh) / (static_cast<double>(L) * R)};
}

}  // namespace pbigamp
