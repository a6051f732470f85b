#include <cstdio>
#include <cmath>
#include "pbigamp/solver.hpp"
#include "tests/naive_step.hpp"
using namespace pbigamp;
int main() {
  setvbuf(stdout, nullptr, _IONBF, 0);
  InstanceParams ip;
  ip.M = 7; ip.P = 5; ip.R = 1; ip.alpha = 0.8;
  ip.rho_u0 = ip.rho_v0 = ip.rho_u = ip.rho_v = 0.4;
  ip.delta0 = ip.delta = 0.01;
  ip.seed = 3;
  const ProblemInstance inst = generate_instance(ip);
  const BernoulliGaussPrior pu(0.4), pv(0.4);
  const AwgnChannel ch(0.01);
  AmpConfig cfg; cfg.threads = 1; cfg.seed = 5;
  Rng rng(9);
  AmpState st = amp_init(inst, pu, pv, ch, cfg, rng);
  const AmpState before = st;
  amp_step(st, inst, pu, pv, ch, cfg);

  // recompute U-side fields for mu=0 from 'before' + new ghat/gbar (= st.ghat/gbar)
  const int L = inst.L, P = ip.P;
  for (int mu = 0; mu < 2; ++mu) {
    double sum_den = 0, sum_lin = 0, sum_self = 0, sum_mem = 0;
    for (int l = 0; l < L; ++l) {
      double F = 0, G = 0, Gp = 0;
      for (int p = 0; p < P; ++p) {
        F += inst.op.at(l, mu, p) * before.vhat[p];
        G += inst.op.at(l, mu, p) * inst.op.at(l, mu, p) * before.vbar[p];
        Gp += inst.op.at(l, mu, p) * inst.op.at(l, mu, p) * before.vbar_prev[p];
      }
      sum_den += (F * F + G) * st.gbar[l] + G * st.ghat[l] * st.ghat[l];
      sum_lin += F * st.ghat[l];
      sum_self += F * F * st.gbar[l];
      sum_mem += Gp * st.ghat[l] * before.ghat[l];
    }
    const double d = std::min(sum_den, -1e-12);
    const double Ub = std::max(-1.0 / d, cfg.variance_floor);
    const double Uh = Ub * (sum_lin - before.uhat[mu] * sum_self -
                            before.uhat_prev[mu] * sum_mem);
    const auto [mh, vb] = pu.denoise(Uh, Ub);
    const double expect = cfg.beta * mh + (1 - cfg.beta) * before.uhat[mu];
    std::printf("mu=%d Uh=%.12g Ub=%.12g -> uhat expect=%.12g got=%.12g (dev %.3e)\n",
                mu, Uh, Ub, expect, st.uhat[mu], st.uhat[mu] - expect);
  }
  return 0;
}
