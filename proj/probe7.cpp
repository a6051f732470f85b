#include <chrono>
#include <cstdio>
#include "pbigamp/harness.hpp"
using namespace pbigamp;
static double now() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
}
int main(int argc, char**) {
  setvbuf(stdout, nullptr, _IONBF, 0);
  for (double alpha : {0.9, 0.62, 0.3}) {
    for (int seed : {11, 12, 13}) {
      InstanceParams ip;
      ip.M = ip.P = 200; ip.R = 1; ip.alpha = alpha;
      ip.rho_u0 = ip.rho_v0 = ip.rho_u = ip.rho_v = 0.1;
      ip.delta0 = ip.delta = 1e-12;
      ip.seed = seed;
      const double t0 = now();
      const ProblemInstance inst = generate_instance(ip);
      const double t1 = now();
      AmpConfig cfg;
      cfg.threads = 2; cfg.restarts = 20; cfg.seed = 5;
      const AmpResult res = amp_run(inst, cfg);
      std::printf("alpha=%.2f seed=%d: nmse=%.3e iters=%d restarts=%d conv=%d (gen %.2fs run %.2fs)\n",
                  alpha, seed, res.final_nmse, res.iterations,
                  res.restarts_used, res.converged, t1 - t0, now() - t1);
    }
  }
  // small size, hard phase, restarts help (criterion 9 flavor)
  for (int seed : {1, 2, 3, 4, 5, 6}) {
    InstanceParams ip;
    ip.M = ip.P = 50; ip.R = 1; ip.alpha = 0.52;
    ip.rho_u0 = ip.rho_v0 = ip.rho_u = ip.rho_v = 0.1;
    ip.delta0 = ip.delta = 1e-12;
    ip.seed = seed;
    const ProblemInstance inst = generate_instance(ip);
    AmpConfig cfg;
    cfg.threads = 2; cfg.restarts = 20; cfg.seed = 5;
    const double t0 = now();
    const AmpResult res = amp_run(inst, cfg);
    std::printf("M=50 alpha=0.52 seed=%d: nmse=%.3e restarts=%d conv=%d (%.2fs)\n",
                seed, res.final_nmse, res.restarts_used, res.converged, now() - t0);
  }
  return 0;
}
