#include "pbigamp/priors_channels.hpp"

#include <omp.h>

#include <cmath>
#include <stdexcept>

namespace pbigamp {

void Prior::denoise_batch(const double* xh, const double* xb, double* mean,
                          double* var, int n, int threads) const {
#pragma omp parallel for schedule(static) num_threads(threads) if (threads > 1)
  for (int i = 0; i < n; ++i) {
    const auto [m, v] = denoise(xh[i], xb[i]);
    mean[i] = m;
    var[i] = v;
  }
}

void Channel::correct_batch(const double* y, const double* zh,
                            const double* zb, double* gh, double* gb, int n,
                            int threads) const {
#pragma omp parallel for schedule(static) num_threads(threads) if (threads > 1)
  for (int i = 0; i < n; ++i) {
    const auto [g, gbz] = correct(y[i], zh[i], zb[i]);
    gh[i] = g;
    gb[i] = gbz;
  }
}

BernoulliGaussPrior::BernoulliGaussPrior(double rho) : rho_(rho) {
  if (rho < 0.0 || rho > 1.0)
    throw std::invalid_argument("sparsity must lie in [0,1]");
}

double BernoulliGaussPrior::f0(double xh, double xb) const {
  xb = std::max(xb, kVarianceFloor);
  const double spike = rho_ < 1.0
                           ? std::exp(std::log1p(-rho_) + log_gauss(xh, 0.0, xb))
                           : 0.0;
  const double slab =
      rho_ > 0.0 ? std::exp(std::log(rho_) + log_gauss(xh, 0.0, 1.0 + xb))
                 : 0.0;
  return spike + slab;
}

double BernoulliGaussPrior::f1(double xh, double xb) const {
  xb = std::max(xb, kVarianceFloor);
  if (rho_ <= 0.0) return 0.0;
  return std::exp(std::log(rho_) + log_gauss(xh, 0.0, 1.0 + xb)) * xh /
         (1.0 + xb);
}

std::pair<double, double> BernoulliGaussPrior::denoise(double xh,
                                                       double xb) const {
  xb = std::max(xb, kVarianceFloor);
  if (rho_ <= 0.0) return {0.0, 0.0};
  const double mp = xh / (1.0 + xb);       // slab posterior mean
  const double vp = xb / (1.0 + xb);       // slab posterior variance
  double pi1 = 1.0;                        // posterior weight of the slab
  if (rho_ < 1.0) {
    // log odds spike/slab; exp overflow saturates pi1 at 0 which is the
    // correct limit
    const double lr = std::log1p(-rho_) - std::log(rho_) +
                      log_gauss(xh, 0.0, xb) - log_gauss(xh, 0.0, 1.0 + xb);
    pi1 = 1.0 / (1.0 + std::exp(lr));
  }
  const double mean = pi1 * mp;
  const double var = pi1 * vp + pi1 * (1.0 - pi1) * mp * mp;
  return {mean, var};
}

double BernoulliGaussPrior::sample(Rng& rng) const {
  const double u = rng.uniform();
  const double g = rng.gaussian();  // always drawn: stream length is fixed
  return u < rho_ ? g : 0.0;
}

WeightFunction BernoulliGaussPrior::weight(bool with_closed_form) const {
  WeightFunction w;
  const double rho = rho_;
  if (rho > 0.0) {
    w.h = [rho](double x) { return rho * gauss_pdf(x, 0.0, 1.0); };
    w.log_h = [rho](double x) {
      return std::log(rho) + log_gauss(x, 0.0, 1.0);
    };
    w.envelope = GaussianBelief{0.0, 1.0};
  }
  if (rho < 1.0) w.atoms.push_back({0.0, 1.0 - rho});
  if (with_closed_form) {
    w.closed_moment = [this](int i, const GaussianBelief& b) {
      if (i == 0) return f0(b.mean, b.variance);
      if (i == 1) return f1(b.mean, b.variance);
      const auto [m, v] = denoise(b.mean, b.variance);
      return f0(b.mean, b.variance) * (v + m * m);
    };
  }
  return w;
}

QuadraturePrior::QuadraturePrior(WeightFunction w, double q0,
                                 std::function<double(Rng&)> sampler,
                                 bool symmetric)
    : w_(std::move(w)),
      q0_(q0),
      sampler_(std::move(sampler)),
      symmetric_(symmetric) {}

double QuadraturePrior::f0(double xh, double xb) const {
  return moment(w_, 0, {xh, xb});
}

double QuadraturePrior::f1(double xh, double xb) const {
  return moment(w_, 1, {xh, xb});
}

std::pair<double, double> QuadraturePrior::denoise(double xh,
                                                   double xb) const {
  return posterior(w_, {xh, xb});
}

double QuadraturePrior::sample(Rng& rng) const {
  if (!sampler_) throw std::logic_error("prior has no sampler");
  return sampler_(rng);
}

WeightFunction QuadraturePrior::weight(bool with_closed_form) const {
  WeightFunction w = w_;
  if (!with_closed_form) w.closed_moment = nullptr;
  return w;
}

AwgnChannel::AwgnChannel(double delta) : delta_(delta) {
  if (!(delta > 0.0))
    throw std::invalid_argument(
        "noise variance must be positive; use a small floor for the "
        "noiseless limit");
}

double AwgnChannel::f0(double y, double zh, double zb) const {
  zb = std::max(zb, kVarianceFloor);
  return gauss_pdf(y, zh, delta_ + zb);
}

std::pair<double, double> AwgnChannel::correct(double y, double zh,
                                               double zb) const {
  zb = std::max(zb, kVarianceFloor);
  const double denom = delta_ + zb;
  return {(y - zh) / denom, -1.0 / denom};
}

double AwgnChannel::sample(double z, Rng& rng) const {
  return z + std::sqrt(delta_) * rng.gaussian();
}

double AwgnChannel::y_spread(double z_var) const {
  return std::sqrt(delta_ + z_var);
}

bool AwgnChannel::matches(const Channel& other) const {
  const auto* o = dynamic_cast<const AwgnChannel*>(&other);
  return o != nullptr && o->delta_ == delta_;
}

QuadratureChannel::QuadratureChannel(
    std::function<double(double, double)> log_like,
    std::function<GaussianBelief(double)> z_envelope, double noise_var,
    std::function<double(double, Rng&)> sampler)
    : log_like_(std::move(log_like)),
      z_envelope_(std::move(z_envelope)),
      noise_var_(noise_var),
      sampler_(std::move(sampler)) {}

WeightFunction QuadratureChannel::weight_for(double y) const {
  WeightFunction w;
  auto like = log_like_;
  w.log_h = [like, y](double z) { return like(y, z); };
  w.h = [like, y](double z) { return std::exp(like(y, z)); };
  if (z_envelope_) w.envelope = z_envelope_(y);
  return w;
}

double QuadratureChannel::f0(double y, double zh, double zb) const {
  return moment(weight_for(y), 0, {zh, zb});
}

std::pair<double, double> QuadratureChannel::correct(double y, double zh,
                                                     double zb) const {
  zb = std::max(zb, kVarianceFloor);
  const auto [fh, fb] = posterior(weight_for(y), {zh, zb});
  return {(fh - zh) / zb, (fb - zb) / (zb * zb)};
}

double QuadratureChannel::sample(double z, Rng& rng) const {
  if (!sampler_) throw std::logic_error("channel has no sampler");
  return sampler_(z, rng);
}

double QuadratureChannel::y_spread(double z_var) const {
  return std::sqrt(noise_var_ + z_var);
}

bool QuadratureChannel::matches(const Channel&) const { return false; }

void sample_prior(const Prior& prior, double* out, int n, Rng& rng) {
  for (int i = 0; i < n; ++i) out[i] = prior.sample(rng);
}

void sample_channel(const Channel& channel, const double* z, double* y, int n,
                    Rng& rng) {
  for (int i = 0; i < n; ++i) y[i] = channel.sample(z[i], rng);
}

}  // namespace pbigamp
