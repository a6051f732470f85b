#include <chrono>
#include <cstdio>
#include "pbigamp/solver.hpp"
using namespace pbigamp;
int main() {
  setvbuf(stdout, nullptr, _IONBF, 0);
  InstanceParams ip;
  ip.M = ip.P = 200; ip.R = 1; ip.alpha = 0.9;
  ip.rho_u0 = ip.rho_v0 = ip.rho_u = ip.rho_v = 0.1;
  ip.delta0 = ip.delta = 1e-12;
  ip.seed = 11;
  const ProblemInstance inst = generate_instance(ip);
  const BernoulliGaussPrior pu(0.1), pv(0.1);
  const AwgnChannel ch(1e-12);
  AmpConfig cfg; cfg.threads = 2; cfg.seed = 5;
  Rng rng(77);
  AmpState st = amp_init(inst, pu, pv, ch, cfg, rng);
  for (int t = 0; t < 400; ++t) {
    amp_step(st, inst, pu, pv, ch, cfg);
    if (t % 25 == 24 || t < 5) {
      double num = 0, den = 0;
      for (int l = 0; l < st.L; ++l) {
        const double d = inst.Y[l] - st.Zhat[l];
        num += d * d; den += inst.Y[l] * inst.Y[l];
      }
      std::printf("t=%3d nmse=%.6f resid=%.3e Zbar0=%.3e ghat0=%.3e ubar_mean=%.3e\n",
                  t, 0.5 * (nmse(inst.U, st.uhat) + nmse(inst.V, st.vhat)),
                  std::sqrt(num / den), st.Zbar[0], st.ghat[0],
                  [&]{ double s=0; for (double x : st.ubar) s+=x; return s/st.ubar.size(); }());
    }
  }
  return 0;
}
