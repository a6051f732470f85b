#include "pbigamp/integrate.hpp"

#include <gsl/gsl_integration.h>

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

namespace pbigamp {

GaussHermite::GaussHermite(int n) {
  gsl_integration_fixed_workspace* ws = gsl_integration_fixed_alloc(
      gsl_integration_fixed_hermite, n, 0.0, 1.0, 0.0, 0.0);
  if (!ws) throw std::runtime_error("Gauss-Hermite rule allocation failed");
  const double* x = gsl_integration_fixed_nodes(ws);
  const double* w = gsl_integration_fixed_weights(ws);
  nodes_.assign(x, x + n);
  weights_.assign(w, w + n);
  lifted_.resize(n);
  for (int k = 0; k < n; ++k)
    lifted_[k] = std::log(weights_[k]) + nodes_[k] * nodes_[k];
  gsl_integration_fixed_free(ws);
}

const GaussHermite& GaussHermite::rule127() {
  static const GaussHermite rule(127);
  return rule;
}

double simpson_fixed(const Integrand& f, double a, double b, int n) {
  if (n < 2) n = 2;
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double s_odd = 0.0, s_even = 0.0;
  for (int i = 1; i < n; i += 2) s_odd += f(a + i * h);
  for (int i = 2; i < n; i += 2) s_even += f(a + i * h);
  return h / 3.0 * (f(a) + f(b) + 4.0 * s_odd + 2.0 * s_even);
}

namespace {

double adsimp_rec(const Integrand& f, double a, double fa, double m, double fm,
                  double b, double fb, double s_whole, double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double h6 = (b - a) / 12.0;
  const double s_left = h6 * (fa + 4.0 * flm + fm);
  const double s_right = h6 * (fm + 4.0 * frm + fb);
  const double s2 = s_left + s_right;
  const double err = (s2 - s_whole) / 15.0;
  // the relative escape keeps panels whose requested absolute tolerance
  // underflows (tiny integrals) from recursing to full depth
  if (depth <= 0 || std::abs(err) <= tol ||
      std::abs(err) <= 4e-16 * std::abs(s2))
    return s2 + err;
  return adsimp_rec(f, a, fa, lm, flm, m, fm, s_left, 0.5 * tol, depth - 1) +
         adsimp_rec(f, m, fm, rm, frm, b, fb, s_right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const Integrand& f, double a, double b, double abs_tol,
                        int max_depth) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double s = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adsimp_rec(f, a, fa, m, fm, b, fb, s, abs_tol, max_depth);
}

double integrate_panels(const Integrand& f, const std::vector<double>& edges,
                        double rel_tol) {
  const int np = static_cast<int>(edges.size()) - 1;
  if (np < 1) return 0.0;
  std::vector<double> rough(np);
  double scale = 0.0;
  for (int i = 0; i < np; ++i) {
    rough[i] = simpson_fixed(f, edges[i], edges[i + 1], 8);
    scale += std::abs(rough[i]);
  }
  if (scale == 0.0) scale = 1e-300;
  double total = 0.0;
  for (int i = 0; i < np; ++i) {
    // panel budget proportional to its share of the rough mass, floored so
    // that panels that look empty at depth 8 still get refined
    const double share =
        std::max(std::abs(rough[i]) / scale, 1.0 / (16.0 * np));
    total += adaptive_simpson(f, edges[i], edges[i + 1],
                              rel_tol * scale * share);
  }
  return total;
}

std::vector<double> geometric_edges(double core, double upper) {
  std::vector<double> edges{0.0};
  if (upper <= 0.0) return edges;
  core = std::max(core, upper * 1e-12);
  for (double x = core / 8.0; x < upper; x *= 2.0) edges.push_back(x);
  edges.push_back(upper);
  return edges;
}

double integrate_even_twoscale(const Integrand& f, double core, double upper,
                               double rel_tol) {
  return 2.0 * integrate_panels(f, geometric_edges(core, upper), rel_tol);
}

}  // namespace pbigamp
