#include <chrono>
#include <cstdio>

#include "pbigamp/harness.hpp"
#include "pbigamp/parallel.hpp"

using namespace pbigamp;

double now() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

int main() {
  setvbuf(stdout, nullptr, _IONBF, 0);
  // 1. stability threshold in alpha for several rho
  for (double rho : {0.1, 0.3, 0.6}) {
    double lo = 0.3, hi = 0.7;
    while (hi - lo > 1e-4) {
      const double mid = 0.5 * (lo + hi);
      (stability_at_zero({rho, 1e-12, mid}) == Stability::kStable ? lo : hi) =
          mid;
    }
    std::printf("stability flip rho=%.1f: alpha*=%.6f\n", rho, 0.5 * (lo + hi));
  }

  // 2. possible/impossible boundary
  for (double rho : {0.1, 0.3, 0.6}) {
    double lo = 0.5 * rho, hi = 2.0 * rho + 0.05;
    while (hi - lo > 1e-4) {
      const double mid = 0.5 * (lo + hi);
      (low_fixed_point_exists({rho, 1e-12, mid}) ? hi : lo) = mid;
    }
    std::printf("possible boundary rho=%.1f: alpha*=%.6f (rho=%g)\n", rho,
                0.5 * (lo + hi), rho);
  }

  // 3. fixed points at spec examples
  auto show_fp = [](double rho, double delta, double alpha) {
    const FixedPointReport r = find_fixed_points({rho, delta, alpha});
    std::printf("fp rho=%g delta=%g alpha=%g phase=%s:", rho, delta, alpha,
                to_string(r.phase).c_str());
    for (const auto& p : r.points)
      std::printf(" (m=%.10g nmse=%.6g %s)", p.m, p.nmse,
                  to_string(p.stability).c_str());
    std::printf("\n");
  };
  show_fp(0.1, 1e-12, 0.4);
  show_fp(0.1, 1e-12, 0.05);
  show_fp(0.6, 1e-12, 0.75);
  show_fp(0.5, 1e-5, 0.49);
  show_fp(0.5, 1e-5, 0.68);
  show_fp(0.1, 1e-12, 0.3);

  // 4. free entropy stationarity at fixed points of (0.5, 1e-5, {0.49,0.68})
  for (double alpha : {0.49, 0.68}) {
    const CaseStudyParams p{0.5, 1e-5, alpha};
    const FixedPointReport r = find_fixed_points(p);
    for (const auto& fp : r.points) {
      if (fp.m <= 0.0) continue;
      const double slope = free_entropy_slope(fp.m, p);
      std::printf(
          "phi slope at alpha=%g m=%.12g (nmse=%.3g, %s): %.3e   phi=%.12g\n",
          alpha, fp.m, fp.nmse, to_string(fp.stability).c_str(), slope,
          free_entropy(fp.m, p));
    }
  }
  // ordering of maxima at alpha=0.68
  {
    const CaseStudyParams p{0.5, 1e-5, 0.68};
    const FixedPointReport r = find_fixed_points(p);
    double phi_low = 0, phi_high = 0, nm_low = 2, nm_high = -1;
    for (const auto& fp : r.points) {
      if (fp.stability == Stability::kUnstable) continue;
      const double phi = free_entropy(fp.m, p);
      if (fp.nmse < nm_low) { nm_low = fp.nmse; phi_low = phi; }
      if (fp.nmse > nm_high) { nm_high = fp.nmse; phi_high = phi; }
    }
    std::printf("alpha=0.68: phi(low nmse=%.3g)=%.9g phi(high nmse=%.3g)=%.9g  low-global=%d\n",
                nm_low, phi_low, nm_high, phi_high, phi_low > phi_high);
  }

  // 5. uninformed boundary for a few rho
  double t0 = now();
  for (double rho : {0.05, 0.1, 0.3, 0.6, 0.9}) {
    const PhaseDiagram pd = phase_diagram({rho}, {0.6}, 1e-12, 0.9, 1e-12, 2);
    std::printf("boundaries rho=%.2f: possible=%.4f uninformed=%.4f informed=%.4f  (%.1fs)\n",
                rho, pd.boundaries[0].alpha_possible,
                pd.boundaries[0].alpha_uninformed,
                pd.boundaries[0].alpha_informed, now() - t0);
    t0 = now();
  }

  // 6. solver smoke: easy phase instance
  {
    InstanceParams ip;
    ip.M = ip.P = 200;
    ip.R = 1;
    ip.alpha = 0.9;
    ip.rho_u0 = ip.rho_v0 = ip.rho_u = ip.rho_v = 0.1;
    ip.delta0 = ip.delta = 1e-12;
    ip.seed = 11;
    const double t1 = now();
    const ProblemInstance inst = generate_instance(ip);
    AmpConfig cfg;
    cfg.threads = 2;
    cfg.restarts = 20;
    cfg.seed = 5;
    const AmpResult res = amp_run(inst, cfg);
    std::printf("amp easy: nmse=%.3e iters=%d restarts=%d converged=%d (%.2fs)\n",
                res.final_nmse, res.iterations, res.restarts_used,
                res.converged, now() - t1);
  }
  // deep hard phase
  {
    InstanceParams ip;
    ip.M = ip.P = 200;
    ip.R = 1;
    ip.alpha = 0.3;
    ip.rho_u0 = ip.rho_v0 = ip.rho_u = ip.rho_v = 0.1;
    ip.delta0 = ip.delta = 1e-12;
    ip.seed = 12;
    const double t1 = now();
    const ProblemInstance inst = generate_instance(ip);
    AmpConfig cfg;
    cfg.threads = 2;
    cfg.restarts = 3;
    cfg.seed = 5;
    const AmpResult res = amp_run(inst, cfg);
    std::printf("amp hard: nmse=%.4f iters=%d restarts=%d (%.2fs)\n",
                res.final_nmse, res.iterations, res.restarts_used,
                now() - t1);
  }
  return 0;
}
