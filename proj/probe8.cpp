#include <chrono>
#include <cstdio>
#include "pbigamp/solver.hpp"
using namespace pbigamp;
static double now() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
}
int main() {
  setvbuf(stdout, nullptr, _IONBF, 0);
  InstanceParams ip;
  ip.M = ip.P = 200; ip.R = 1; ip.alpha = 0.9;
  ip.rho_u0 = ip.rho_v0 = ip.rho_u = ip.rho_v = 0.1;
  ip.delta0 = ip.delta = 1e-12;
  ip.seed = 11;
  double t0 = now();
  const ProblemInstance inst = generate_instance(ip);
  std::printf("gen: %.2fs L=%d\n", now() - t0, inst.L);
  const BernoulliGaussPrior pu(0.1), pv(0.1);
  const AwgnChannel ch(1e-12);
  AmpConfig cfg; cfg.threads = 2; cfg.seed = 5;
  Rng rng(77);
  AmpState st = amp_init(inst, pu, pv, ch, cfg, rng);
  t0 = now();
  for (int t = 0; t < 30; ++t) {
    amp_step(st, inst, pu, pv, ch, cfg);
    if (t % 10 == 9)
      std::printf("t=%d nmse=%.4f  (%.3f s/iter)\n", t,
                  0.5 * (nmse(inst.U, st.uhat) + nmse(inst.V, st.vhat)),
                  (now() - t0) / (t + 1));
  }
  return 0;
}
