#include <cstdio>

#include "pbigamp/state_evolution.hpp"

using namespace pbigamp;

int main() {
  setvbuf(stdout, nullptr, _IONBF, 0);
  const CaseStudyParams p{0.5, 1e-5, 0.68};
  const FixedPointReport r = find_fixed_points(p);
  const double m = r.points.back().m;
  std::printf("root m = %.17g\n", m);
  for (int n : {4096, 16384, 65536})
    std::printf("G_fine(n=%d)  = %.6e\n", n,
                scalar_se_step(m, p, 0.0, n) - m);
  for (double tol : {1e-11, 1e-12, 1e-13})
    std::printf("G_adapt(%g) = %.6e\n", tol,
                scalar_se_step(m, p, tol) - m);
  // FD ladder of phi around the root
  for (int k = 0; k <= 10; ++k) {
    const double h = 1e-4 * std::pow(4.0, -k);
    const double d =
        (free_entropy(m + h, p, 16384) - free_entropy(m - h, p, 16384)) /
        (2.0 * h);
    std::printf("k=%2d h=%.3e D=%.6e\n", k, h, d);
  }
  // does a manually polished root do better?
  double x = m;
  for (int it = 0; it < 6; ++it) {
    const double g = scalar_se_step(x, p, 0.0, 32768) - x;
    const double h = 1e-8;
    const double gp = (scalar_se_step(x + h, p, 0.0, 32768) -
                       scalar_se_step(x - h, p, 0.0, 32768)) /
                          (2.0 * h) -
                      1.0;
    std::printf("newton it=%d x=%.17g g=%.3e\n", it, x, g);
    x -= g / gp;
  }
  const double slope = free_entropy_slope(x, p);
  std::printf("slope at newton root: %.6e\n", slope);
  return 0;
}
