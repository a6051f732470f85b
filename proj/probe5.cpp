#include <chrono>
#include <cstdio>
#include "pbigamp/state_evolution.hpp"
using namespace pbigamp;
static double now() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
}
int main() {
  setvbuf(stdout, nullptr, _IONBF, 0);
  // which alpha probes are slow for rho=0.3 uninformed?
  for (double a : {0.45, 0.52, 0.524, 0.526, 0.5265, 0.527, 0.53, 0.6, 1.0, 2.0, 3.0}) {
    const CaseStudyParams p{0.3, 1e-12, a};
    double t0 = now();
    ScalarSeRun run = iterate_scalar_se(1e-8, p, 100000, 1e-9);
    std::printf("uninf rho=0.3 a=%.4f: iters=%6d nm=%.3e conv=%d  %.2fs\n", a,
                run.iterations, se_to_nmse(run.m_final, 0.3), run.converged,
                now() - t0);
  }
  for (double a : {0.295, 0.3, 0.302, 0.305, 0.31, 0.45}) {
    const CaseStudyParams p{0.3, 1e-12, a};
    double t0 = now();
    bool e = low_fixed_point_exists(p);
    std::printf("exists rho=0.3 a=%.4f: %d  %.2fs\n", a, e, now() - t0);
  }
  return 0;
}
