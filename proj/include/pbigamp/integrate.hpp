#pragma once

#include <cmath>
#include <functional>
#include <vector>

namespace pbigamp {

// 127-node Gauss-Hermite rule for integrals against exp(-x^2),
// nodes/weights generated once through GSL.
class GaussHermite {
 public:
  static const GaussHermite& rule127();

  int size() const { return static_cast<int>(nodes_.size()); }
  double node(int k) const { return nodes_[k]; }
  double weight(int k) const { return weights_[k]; }
  // log(w_k) + x_k^2 : weights with the Gaussian decay lifted off, for
  // log-domain summation of sharply scaled integrands
  double lifted_log_weight(int k) const { return lifted_[k]; }

 private:
  explicit GaussHermite(int n);
  std::vector<double> nodes_, weights_, lifted_;
};

using Integrand = std::function<double(double)>;

// Composite Simpson with n (even) fixed intervals. Deterministic node set,
// smooth in any parameters of f; used where integrals get differenced.
double simpson_fixed(const Integrand& f, double a, double b, int n);

// Adaptive Simpson on [a,b] to absolute tolerance.
double adaptive_simpson(const Integrand& f, double a, double b, double abs_tol,
                        int max_depth = 30);

// Adaptive Simpson over consecutive panels with a relative-error target:
// a coarse pass fixes the scale, then per-panel absolute budgets are
// distributed proportionally.
double integrate_panels(const Integrand& f, const std::vector<double>& edges,
                        double rel_tol);

// Integral of an even function over the whole line, panelized geometrically
// between a core scale (fine structure near 0) and an outer scale (bulk),
// i.e. 2 * int_0^upper with edges {0, core/8, core/4, ..., upper}.
double integrate_even_twoscale(const Integrand& f, double core, double upper,
                               double rel_tol);

std::vector<double> geometric_edges(double core, double upper);

inline double log_gauss(double x, double mean, double var) {
  const double d = x - mean;
  return -0.5 * (d * d / var + std::log(6.283185307179586476925286766559 * var));
}

inline double gauss_pdf(double x, double mean, double var) {
  return std::exp(log_gauss(x, mean, var));
}

}  // namespace pbigamp
