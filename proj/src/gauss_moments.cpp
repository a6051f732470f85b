#include "pbigamp/gauss_moments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pbigamp {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::string describe(const char* what, int i, const GaussianBelief& b) {
  return std::string(what) + " at i=" + std::to_string(i) +
         " mean=" + std::to_string(b.mean) +
         " variance=" + std::to_string(b.variance);
}
}  // namespace

NumericalDomainError::NumericalDomainError(int i, const GaussianBelief& b)
    : std::runtime_error(describe("non-finite Gaussian moment", i, b)),
      moment_index(i),
      belief(b) {}

DegeneratePosteriorError::DegeneratePosteriorError(const GaussianBelief& b)
    : std::runtime_error(describe("degenerate posterior, f0 underflow", 0, b)),
      belief(b) {}

double ScaledMoments::value(int i) const {
  const double s = i == 0 ? s0 : (i == 1 ? s1 : s2);
  if (s == 0.0) return 0.0;
  return std::exp(log_scale) * s;
}

double ScaledMoments::log_f0() const {
  if (s0 <= 0.0) return kNegInf;
  return log_scale + std::log(s0);
}

namespace {

double log_h_value(const WeightFunction& w, double x) {
  if (w.log_h) return w.log_h(x);
  const double v = w.h(x);
  return v > 0.0 ? std::log(v) : kNegInf;
}

// Gauss-Hermite accumulation in a shared log frame, centered on the product
// of belief and envelope when an envelope is declared.
void accumulate_gh(const WeightFunction& w, const GaussianBelief& b,
                   std::vector<double>& logs, std::vector<double>& xs) {
  double center = b.mean, var = b.variance;
  if (w.envelope) {
    const double prec = 1.0 / b.variance + 1.0 / w.envelope->variance;
    var = 1.0 / prec;
    center = var * (b.mean / b.variance +
                    w.envelope->mean / w.envelope->variance);
  }
  const GaussHermite& gh = GaussHermite::rule127();
  const double scale = std::sqrt(2.0 * var);
  const double log_pref = std::log(scale);
  for (int k = 0; k < gh.size(); ++k) {
    const double x = center + scale * gh.node(k);
    const double lh = log_h_value(w, x);
    if (lh == kNegInf) continue;
    const double lg = log_pref + gh.lifted_log_weight(k) + lh +
                      log_gauss(x, b.mean, b.variance);
    logs.push_back(lg);
    xs.push_back(x);
  }
}

// Adaptive-Simpson path for the continuous part of weights carrying point
// masses, on [mean - 12 sd, mean + 12 sd]. Plain-domain values.
void simpson_integrals(const WeightFunction& w, const GaussianBelief& b,
                       double out[3]) {
  const double sd = std::sqrt(b.variance);
  const double lo = b.mean - 12.0 * sd, hi = b.mean + 12.0 * sd;
  std::vector<double> edges{lo};
  if (w.envelope) {
    const double prec = 1.0 / b.variance + 1.0 / w.envelope->variance;
    const double pv = 1.0 / prec;
    const double pc = pv * (b.mean / b.variance +
                            w.envelope->mean / w.envelope->variance);
    const double ps = std::sqrt(pv);
    for (double e : {pc - 6.0 * ps, pc, pc + 6.0 * ps})
      if (e > lo && e < hi) edges.push_back(e);
  } else {
    edges.push_back(b.mean);
  }
  edges.push_back(hi);
  std::sort(edges.begin(), edges.end());
  for (int i = 0; i <= 2; ++i) {
    auto f = [&](double x) {
      const double hv = w.h ? w.h(x) : std::exp(w.log_h(x));
      if (hv <= 0.0) return 0.0;
      double xi = 1.0;
      for (int k = 0; k < i; ++k) xi *= x;
      return xi * hv * gauss_pdf(x, b.mean, b.variance);
    };
    out[i] = integrate_panels(f, edges, 1e-12);
  }
}

}  // namespace

ScaledMoments raw_moments(const WeightFunction& w, GaussianBelief b,
                          bool allow_closed) {
  b = floored(b);
  if (allow_closed && w.closed_moment) {
    ScaledMoments m;
    m.log_scale = 0.0;
    m.s0 = w.closed_moment(0, b);
    m.s1 = w.closed_moment(1, b);
    m.s2 = w.closed_moment(2, b);
    return m;
  }

  std::vector<double> logs, xs;
  for (const PointMass& a : w.atoms) {
    if (a.weight <= 0.0) continue;
    logs.push_back(std::log(a.weight) +
                   log_gauss(a.location, b.mean, b.variance));
    xs.push_back(a.location);
  }
  const bool has_density = static_cast<bool>(w.h) || static_cast<bool>(w.log_h);
  const bool use_simpson = !w.atoms.empty();
  if (has_density && !use_simpson) accumulate_gh(w, b, logs, xs);

  double integrals[3] = {0.0, 0.0, 0.0};
  if (has_density && use_simpson) simpson_integrals(w, b, integrals);
  const double int_mass = std::abs(integrals[0]) + std::abs(integrals[1]) +
                          std::abs(integrals[2]);

  // shared scale across atom terms and the continuous integrals
  double peak = kNegInf;
  for (double l : logs) peak = std::max(peak, l);
  if (int_mass > 0.0) peak = std::max(peak, std::log(int_mass));

  ScaledMoments m;
  if (peak == kNegInf) return m;
  m.log_scale = peak;
  for (size_t k = 0; k < logs.size(); ++k) {
    const double e = std::exp(logs[k] - peak);
    m.s0 += e;
    m.s1 += e * xs[k];
    m.s2 += e * xs[k] * xs[k];
  }
  for (int i = 0; i <= 2; ++i) {
    if (integrals[i] == 0.0) continue;
    const double mag = std::exp(std::log(std::abs(integrals[i])) - peak);
    const double term = integrals[i] > 0.0 ? mag : -mag;
    if (i == 0) m.s0 += term;
    if (i == 1) m.s1 += term;
    if (i == 2) m.s2 += term;
  }
  return m;
}

namespace {

double moment_impl(const WeightFunction& w, int i, GaussianBelief b,
                   bool allow_closed) {
  if (i < 0 || i > 2) throw std::invalid_argument("moment index must be 0..2");
  const ScaledMoments m = raw_moments(w, b, allow_closed);
  const double v = m.value(i);
  if (!std::isfinite(v)) throw NumericalDomainError(i, floored(b));
  return v;
}

}  // namespace

double moment(const WeightFunction& w, int i, GaussianBelief b) {
  return moment_impl(w, i, b, true);
}

double moment_quadrature(const WeightFunction& w, int i, GaussianBelief b) {
  return moment_impl(w, i, b, false);
}

std::pair<double, double> posterior(const WeightFunction& w, GaussianBelief b,
                                    bool allow_closed) {
  b = floored(b);
  const ScaledMoments m = raw_moments(w, b, allow_closed);
  if (!(m.s0 > 0.0) || m.log_f0() < -700.0)
    throw DegeneratePosteriorError(b);
  const double fhat = m.s1 / m.s0;
  const double fbar = std::max(0.0, m.s2 / m.s0 - fhat * fhat);
  if (!std::isfinite(fhat) || !std::isfinite(fbar))
    throw NumericalDomainError(1, b);
  return {fhat, fbar};
}

double posterior_mean(const WeightFunction& w, GaussianBelief b) {
  return posterior(w, b).first;
}

double posterior_var(const WeightFunction& w, GaussianBelief b) {
  return posterior(w, b).second;
}

double g_hat(const WeightFunction& w, GaussianBelief b) {
  b = floored(b);
  return (posterior_mean(w, b) - b.mean) / b.variance;
}

double g_bar(const WeightFunction& w, GaussianBelief b) {
  b = floored(b);
  return (posterior_var(w, b) - b.variance) / (b.variance * b.variance);
}

IdentityDiagnostics check_identities(const WeightFunction& w, GaussianBelief b,
                                     double step, double s, double rho,
                                     double t) {
  b = floored(b);
  IdentityDiagnostics d;
  const double hm = step * std::max(1.0, std::abs(b.mean));
  const double hv = step * std::max(1.0, b.variance);

  auto f = [&](int i, double mean, double var) {
    return moment(w, i, {mean, var});
  };

  for (int i = 0; i <= 1; ++i) {
    const double fd = (f(i, b.mean + hm, b.variance) -
                       f(i, b.mean - hm, b.variance)) /
                      (2.0 * hm);
    const double rhs =
        (f(i + 1, b.mean, b.variance) - b.mean * f(i, b.mean, b.variance)) /
        b.variance;
    const double r = std::abs(fd - rhs);
    if (i == 0)
      d.mean_recursion_i0 = r;
    else
      d.mean_recursion_i1 = r;
  }

  {
    const double fd = (f(0, b.mean, b.variance + hv) -
                       f(0, b.mean, b.variance - hv)) /
                      (2.0 * hv);
    const double f0 = f(0, b.mean, b.variance);
    const double f1 = f(1, b.mean, b.variance);
    const double f2 = f(2, b.mean, b.variance);
    const double rhs = (f2 - 2.0 * b.mean * f1 -
                        (b.variance - b.mean * b.mean) * f0) /
                       (2.0 * b.variance * b.variance);
    d.var_recursion_i0 = std::abs(fd - rhs);
  }

  {
    // d/ds f0(sqrt(s) t, rho - s) against the t-derivative form, both sides
    // by central differences; the nested t-derivative uses a wider step to
    // keep second-difference roundoff below the truncation error
    auto comp = [&](double ss, double tt) {
      return f(0, std::sqrt(ss) * tt, rho - ss);
    };
    const double hs = step * std::max(1.0, std::abs(s));
    const double lhs = (comp(s + hs, t) - comp(s - hs, t)) / (2.0 * hs);
    const double ht = 1e-4 * std::max(1.0, std::abs(t));
    auto g = [&](double tt) {
      const double dfdt = (comp(s, tt + ht) - comp(s, tt - ht)) / (2.0 * ht);
      return std::exp(-0.5 * tt * tt) * dfdt;
    };
    const double dg = (g(t + ht) - g(t - ht)) / (2.0 * ht);
    const double rhs = -std::exp(0.5 * t * t) / (2.0 * s) * dg;
    d.diffusion = std::abs(lhs - rhs);
  }
  return d;
}

}  // namespace pbigamp
