#include <chrono>
#include <cstdio>
#include "pbigamp/state_evolution.hpp"
using namespace pbigamp;
static double now() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
}
int main() {
  setvbuf(stdout, nullptr, _IONBF, 0);
  // possible boundary accuracy
  for (double rho : {0.1, 0.3, 0.6}) {
    double t0 = now();
    double lo = 0.5 * rho, hi = 2.0 * rho + 0.05;
    while (hi - lo > 5e-4) {
      const double mid = 0.5 * (lo + hi);
      (low_fixed_point_exists({rho, 1e-12, mid}) ? hi : lo) = mid;
    }
    std::printf("possible rho=%.1f: alpha*=%.6f  (%.1fs)\n", rho,
                0.5 * (lo + hi), now() - t0);
  }
  // full boundary set with timing
  double t0 = now();
  for (double rho : {0.05, 0.1, 0.3, 0.6, 0.9}) {
    const PhaseDiagram pd = phase_diagram({rho}, {0.6}, 1e-12, 0.9, 1e-12, 2);
    std::printf("rho=%.2f: possible=%.4f uninformed=%.4f informed=%.4f (%.1fs)\n",
                rho, pd.boundaries[0].alpha_possible,
                pd.boundaries[0].alpha_uninformed,
                pd.boundaries[0].alpha_informed, now() - t0);
    t0 = now();
  }
  return 0;
}
