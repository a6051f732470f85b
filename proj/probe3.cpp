#include <cstdio>
#include "pbigamp/state_evolution.hpp"
using namespace pbigamp;
int main() {
  setvbuf(stdout, nullptr, _IONBF, 0);
  for (double alpha : {0.49, 0.68}) {
    const CaseStudyParams p{0.5, 1e-5, alpha};
    const FixedPointReport r = find_fixed_points(p);
    for (const auto& fp : r.points) {
      if (fp.m <= 0.0) continue;
      std::printf("alpha=%g m=%.14g nmse=%.4g %s slope=%.4e\n", alpha, fp.m,
                  fp.nmse, to_string(fp.stability).c_str(),
                  free_entropy_slope(fp.m, p));
    }
  }
  // phi(m->0) continuity
  const CaseStudyParams p{0.5, 1e-5, 0.49};
  std::printf("phi(0)=%.12g phi(1e-10)=%.12g phi(1e-6)=%.12g\n",
              free_entropy(0.0, p), free_entropy(1e-10, p),
              free_entropy(1e-6, p));
  // local max at nMSE=1 for alpha=0.49
  std::printf("phi(0)-phi(0.01)=%.4e (positive = local max)\n",
              free_entropy(0.0, p) - free_entropy(0.01, p));
  return 0;
}
