#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pbigamp/integrate.hpp"

namespace pbigamp {

inline constexpr double kVarianceFloor = 1e-12;

// Mean/variance pair of a Gaussian message or estimate.
struct GaussianBelief {
  double mean = 0.0;
  double variance = 1.0;
};

inline GaussianBelief floored(GaussianBelief b) {
  if (b.variance < kVarianceFloor) b.variance = kVarianceFloor;
  return b;
}

struct PointMass {
  double location = 0.0;
  double weight = 0.0;
};

// Nonnegative scalar weight h(x) integrated against Gaussians. Dirac
// components are listed separately and always handled analytically. The
// optional envelope declares a Gaussian region carrying the mass of the
// continuous part, so the quadrature can center on the product of belief
// and envelope. closed_moment, when set, short-circuits quadrature.
struct WeightFunction {
  std::function<double(double)> h;
  std::function<double(double)> log_h;
  std::vector<PointMass> atoms;
  std::optional<GaussianBelief> envelope;
  std::function<double(int, const GaussianBelief&)> closed_moment;
};

struct NumericalDomainError : std::runtime_error {
  NumericalDomainError(int i, const GaussianBelief& b);
  int moment_index;
  GaussianBelief belief;
};

struct DegeneratePosteriorError : std::runtime_error {
  explicit DegeneratePosteriorError(const GaussianBelief& b);
  GaussianBelief belief;
};

// f_i up to i = 2 evaluated with a shared log scale: f_i = exp(log_scale)*s[i].
// Ratios f1/f0, f2/f0 stay well-defined long after the raw values underflow.
struct ScaledMoments {
  double log_scale = 0.0;
  double s0 = 0.0, s1 = 0.0, s2 = 0.0;
  double value(int i) const;
  double log_f0() const;
};

ScaledMoments raw_moments(const WeightFunction& w, GaussianBelief b,
                          bool allow_closed = true);

// f_i^h(x_hat, x_bar) = int x^i h(x) N(x; x_hat, x_bar) dx, i in {0,1,2}
double moment(const WeightFunction& w, int i, GaussianBelief b);
// same, forcing the quadrature path even when a closed form is declared
double moment_quadrature(const WeightFunction& w, int i, GaussianBelief b);

// mean and variance of h(x) N(x; b) / f0
double posterior_mean(const WeightFunction& w, GaussianBelief b);
double posterior_var(const WeightFunction& w, GaussianBelief b);
std::pair<double, double> posterior(const WeightFunction& w, GaussianBelief b,
                                    bool allow_closed = true);

// output-correction functions: g_hat = (fhat - x_hat)/x_bar,
// g_bar = (fbar - x_bar)/x_bar^2
double g_hat(const WeightFunction& w, GaussianBelief b);
double g_bar(const WeightFunction& w, GaussianBelief b);

// Residuals of the moment-derivative identities under central finite
// differences. The diffusion identity is evaluated on the composite argument
// f0(sqrt(s)*t, rho - s) at the supplied (s, rho, t).
struct IdentityDiagnostics {
  double mean_recursion_i0 = 0.0;  // d f0/d x_hat vs (f1 - x_hat f0)/x_bar
  double mean_recursion_i1 = 0.0;
  double var_recursion_i0 = 0.0;   // d f0/d x_bar recursion
  double diffusion = 0.0;          // s-derivative identity
};

IdentityDiagnostics check_identities(const WeightFunction& w, GaussianBelief b,
                                     double step, double s = 0.3,
                                     double rho = 0.8, double t = 0.7);

}  // namespace pbigamp
