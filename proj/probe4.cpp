#include <cstdio>
#include <cmath>
#include "pbigamp/state_evolution.hpp"
using namespace pbigamp;
int main() {
  setvbuf(stdout, nullptr, _IONBF, 0);
  const CaseStudyParams p{0.5, 1e-5, 0.68};
  const FixedPointReport r = find_fixed_points(p);
  const double m = r.points.back().m;
  std::printf("m=%.17g\n", m);
  const double m_max = std::sqrt(p.delta + p.rho * p.rho);
  for (int n : {16384, 65536}) {
    std::printf("--- n=%d\n", n);
    for (int k = 0; k <= 11; ++k) {
      const double h = 1e-4 * std::pow(4.0, -k);
      const double lo = m - h;
      const double hi = std::min(m + h, m_max * (1.0 - 1e-12));
      const double d = (free_entropy(hi, p, n) - free_entropy(lo, p, n)) / (hi - lo);
      std::printf("k=%2d h=%.3e D=%+.6e\n", k, h, d);
    }
  }
  return 0;
}
