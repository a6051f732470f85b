#include "pbigamp/validate.hpp"

#include <cmath>
#include <sstream>

#include "pbigamp/solver.hpp"
#include "pbigamp/state_evolution.hpp"

namespace pbigamp {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

ValidationResult moment_oracle_bg(Rng& rng) {
  double worst = 0.0;
  for (double rho : {0.05, 0.5, 1.0}) {
    const BernoulliGaussPrior prior(rho);
    const WeightFunction generic = prior.weight(false);
    for (int i = 0; i < 12; ++i) {
      const GaussianBelief b{-4.0 + 8.0 * rng.uniform(),
                             1e-3 + 6.0 * rng.uniform()};
      const auto [mh, vb] = prior.denoise(b.mean, b.variance);
      const auto [qh, qv] = posterior(generic, b, false);
      worst = std::max(worst, std::abs(mh - qh) / std::max(1.0, std::abs(qh)));
      worst = std::max(worst, std::abs(vb - qv) / std::max(1.0, std::abs(qv)));
    }
  }
  return {"moment-oracle-bernoulli-gauss", worst < 1e-8,
          "max rel dev " + fmt(worst)};
}

ValidationResult moment_oracle_awgn(Rng& rng) {
  double worst = 0.0;
  for (double delta : {0.05, 0.5, 2.0}) {
    const AwgnChannel ch(delta);
    for (int i = 0; i < 12; ++i) {
      const double y = -3.0 + 6.0 * rng.uniform();
      const GaussianBelief b{-4.0 + 8.0 * rng.uniform(),
                             1e-3 + 6.0 * rng.uniform()};
      WeightFunction w;
      w.h = [&ch, y](double z) { return gauss_pdf(y - z, 0.0, ch.delta()); };
      w.envelope = GaussianBelief{y, delta};
      const auto [gh, gb] = ch.correct(y, b.mean, b.variance);
      const double gh_q = g_hat(w, b);
      const double gb_q = g_bar(w, b);
      worst = std::max(worst, std::abs(gh - gh_q) / std::max(1.0, std::abs(gh)));
      worst = std::max(worst, std::abs(gb - gb_q) / std::max(1.0, std::abs(gb)));
    }
  }
  return {"moment-oracle-awgn", worst < 1e-8, "max rel dev " + fmt(worst)};
}

ValidationResult identity_suite(Rng& rng) {
  double worst = 0.0;
  const BernoulliGaussPrior prior(0.25);
  const AwgnChannel ch(0.8);
  for (int i = 0; i < 20; ++i) {
    const GaussianBelief b{-2.0 + 4.0 * rng.uniform(),
                           0.05 + 2.0 * rng.uniform()};
    const double step = 1e-5 * std::max(1.0, std::abs(b.mean));
    {
      const auto d = check_identities(prior.weight(true), b, step);
      worst = std::max({worst, d.mean_recursion_i0, d.mean_recursion_i1,
                        d.var_recursion_i0, d.diffusion});
    }
    {
      const double y = -2.0 + 4.0 * rng.uniform();
      WeightFunction w;
      w.h = [&ch, y](double z) { return gauss_pdf(y - z, 0.0, ch.delta()); };
      w.envelope = GaussianBelief{y, ch.delta()};
      w.closed_moment = [&ch, y](int i2, const GaussianBelief& bb) {
        const double f0 = ch.f0(y, bb.mean, bb.variance);
        if (i2 == 0) return f0;
        const auto [gh, gb] = ch.correct(y, bb.mean, bb.variance);
        const double fh = bb.mean + bb.variance * gh;
        const double fb = bb.variance + bb.variance * bb.variance * gb;
        return i2 == 1 ? f0 * fh : f0 * (fb + fh * fh);
      };
      const auto d = check_identities(w, b, step);
      worst = std::max({worst, d.mean_recursion_i0, d.mean_recursion_i1,
                        d.var_recursion_i0, d.diffusion});
    }
  }
  return {"moment-identities", worst < 1e-6, "max residual " + fmt(worst)};
}

ValidationResult se_channel_awgn() {
  const double delta = 0.3;
  const AwgnChannel closed(delta);
  const QuadratureChannel generic(
      [delta](double y, double z) { return log_gauss(y - z, 0.0, delta); },
      [delta](double y) { return GaussianBelief{y, delta}; }, delta, nullptr);
  double worst = 0.0;
  for (double mz : {0.0, 0.02, 0.08}) {
    const double a = bo_channel_mhat(closed, mz, 0.09);
    const double b = bo_channel_mhat(generic, mz, 0.09, 1e-9);
    worst = std::max(worst, std::abs(a - b) / std::abs(a));
  }
  return {"se-channel-nested-quadrature", worst < 1e-7,
          "max rel dev " + fmt(worst)};
}

ValidationResult se_scalar_vs_bo() {
  const CaseStudyParams p{0.1, 1e-12, 0.6};
  const BernoulliGaussPrior prior(p.rho);
  const AwgnChannel ch(p.delta);
  const Alphas alphas{2.0 * p.alpha, 2.0 * p.alpha};
  double worst = 0.0;
  for (double m : {0.01, 0.05, 0.09}) {
    const double scalar = scalar_se_step(m, p);
    const BoSeState next = bo_se_step({m, m, 0.0}, prior, prior, ch, alphas);
    worst = std::max(worst, std::abs(scalar - next.m_u));
  }
  return {"se-scalar-vs-bayes-optimal", worst < 1e-10,
          "max abs dev " + fmt(worst)};
}

ValidationResult se_nishimori(Rng& rng) {
  const BernoulliGaussPrior prior(0.2);
  const AwgnChannel ch(1e-3);
  const Alphas alphas{1.4, 1.4};
  SeModel model{&prior, &prior, &prior, &prior, &ch, &ch, alphas};
  double worst = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double mu = 0.2 * rng.uniform() * prior.second_moment();
    const double mv = 0.2 * rng.uniform() * prior.second_moment();
    RsSeState s;
    s.m_u = s.q_u = mu;
    s.m_v = s.q_v = mv;
    s.Q_u = s.Q_v = prior.second_moment();
    const RsSeState n = general_se_step(s, model);
    const BoSeState b = bo_se_step({mu, mv, 0.0}, prior, prior, ch, alphas);
    worst = std::max({worst, std::abs(n.m_u - b.m_u),
                      std::abs(n.m_v - b.m_v), std::abs(n.m_u - n.q_u),
                      std::abs(n.Q_u - prior.second_moment()),
                      std::abs(n.Qh_u)});
  }
  return {"se-nishimori-reduction", worst < 1e-8, "max dev " + fmt(worst)};
}

ValidationResult sensing_bilinear(Rng& rng) {
  const int L = 30, M = 12, P = 9;
  const SensingOperator op(L, M, P, 1, rng.next_u64());
  std::vector<double> u(M), v(P);
  for (double& x : u) x = rng.gaussian();
  for (double& x : v) x = rng.gaussian();
  std::vector<double> X(M * P);
  for (int mu = 0; mu < M; ++mu)
    for (int p = 0; p < P; ++p) X[mu * P + p] = u[mu] * v[p];
  std::vector<double> z(L), au(L * M), av(L * P);
  op.apply(X.data(), z.data());
  op.apply_AU(v.data(), au.data());
  op.apply_AV(u.data(), av.data());
  double worst = 0.0;
  for (int l = 0; l < L; ++l) {
    double s1 = 0.0, s2 = 0.0;
    for (int mu = 0; mu < M; ++mu) s1 += au[l * M + mu] * u[mu];
    for (int p = 0; p < P; ++p) s2 += av[l * P + p] * v[p];
    worst = std::max({worst, std::abs(s1 - z[l]) / std::max(1.0, std::abs(z[l])),
                      std::abs(s2 - z[l]) / std::max(1.0, std::abs(z[l]))});
  }
  return {"sensing-bilinear-consistency", worst < 1e-10,
          "max rel dev " + fmt(worst)};
}

ValidationResult solver_planted() {
  InstanceParams params;
  params.M = 24;
  params.P = 20;
  params.R = 1;
  params.alpha = 0.9;
  params.rho_u0 = params.rho_v0 = params.rho_u = params.rho_v = 0.4;
  params.delta0 = params.delta = 1e-12;
  params.seed = 7;
  ProblemInstance inst = generate_instance(params);
  inst.Y = inst.Z;  // noise-free consistent data

  const BernoulliGaussPrior prior_u(params.rho_u), prior_v(params.rho_v);
  const AwgnChannel channel(params.delta);
  AmpConfig cfg;
  cfg.threads = 1;
  Rng rng(3);
  AmpState st = amp_init(inst, prior_u, prior_v, channel, cfg, rng);
  st.uhat.assign(inst.U.begin(), inst.U.end());
  st.vhat.assign(inst.V.begin(), inst.V.end());
  st.uhat_prev = st.uhat;
  st.vhat_prev = st.vhat;
  st.ubar.assign(st.ubar.size(), cfg.variance_floor);
  st.vbar.assign(st.vbar.size(), cfg.variance_floor);
  st.ubar_prev = st.ubar;
  st.vbar_prev = st.vbar;
  st.ghat.assign(st.ghat.size(), 0.0);
  st.ghat_prev = st.ghat;

  const double before = combined_nmse(inst.U, st.uhat, inst.V, st.vhat);
  for (int t = 0; t < 10; ++t)
    amp_step(st, inst, prior_u, prior_v, channel, cfg);
  const double after = combined_nmse(inst.U, st.uhat, inst.V, st.vhat);
  const double drift = std::abs(after - before);
  return {"solver-planted-fixed-point", drift < 1e-6,
          "nmse drift " + fmt(drift)};
}

}  // namespace

std::vector<ValidationResult> run_validation(std::uint64_t seed) {
  Rng rng(seed);
  std::vector<ValidationResult> results;
  results.push_back(moment_oracle_bg(rng));
  results.push_back(moment_oracle_awgn(rng));
  results.push_back(identity_suite(rng));
  results.push_back(se_channel_awgn());
  results.push_back(se_scalar_vs_bo());
  results.push_back(se_nishimori(rng));
  results.push_back(sensing_bilinear(rng));
  results.push_back(solver_planted());
  return results;
}

}  // namespace pbigamp
