#include <cstdio>
#include <cmath>
#include "pbigamp/solver.hpp"
#include "tests/naive_step.hpp"
using namespace pbigamp;
int main() {
  setvbuf(stdout, nullptr, _IONBF, 0);
  InstanceParams ip;
  ip.M = 7; ip.P = 5; ip.R = 2; ip.alpha = 0.8;
  ip.rho_u0 = ip.rho_v0 = ip.rho_u = ip.rho_v = 0.4;
  ip.delta0 = ip.delta = 0.01;
  ip.seed = 3;
  const ProblemInstance inst = generate_instance(ip);
  const BernoulliGaussPrior pu(0.4), pv(0.4);
  const AwgnChannel ch(0.01);
  AmpConfig cfg; cfg.threads = 1; cfg.seed = 5;
  Rng rng(9);
  AmpState st = amp_init(inst, pu, pv, ch, cfg, rng);
  naive::State ns;
  ns.uhat = st.uhat; ns.ubar = st.ubar; ns.vhat = st.vhat; ns.vbar = st.vbar;
  ns.uhat_p = st.uhat_prev; ns.ubar_p = st.ubar_prev;
  ns.vhat_p = st.vhat_prev; ns.vbar_p = st.vbar_prev;
  ns.ghat = st.ghat; ns.ghat_p = st.ghat_prev;
  for (int t = 0; t < 5; ++t) {
    amp_step(st, inst, pu, pv, ch, cfg);
    naive::step(ns, inst.op, inst.Y, pu, pv, ch, cfg.beta, cfg.variance_floor);
    double w = 0;
    auto cmp = [&](const std::vector<double>& A, const std::vector<double>& B) {
      for (size_t i = 0; i < A.size(); ++i)
        w = std::max(w, std::abs(A[i] - B[i]));
    };
    cmp(st.uhat, ns.uhat); cmp(st.ubar, ns.ubar);
    cmp(st.vhat, ns.vhat); cmp(st.vbar, ns.vbar);
    cmp(st.ghat, ns.ghat); cmp(st.Zhat, ns.Zhat); cmp(st.Zbar, ns.Zbar);
    std::printf("t=%d max dev=%.3e\n", t, w);
  }
  return 0;
}
