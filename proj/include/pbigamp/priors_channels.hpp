#pragma once

#include <functional>
#include <memory>
#include <utility>

#include "pbigamp/gauss_moments.hpp"
#include "pbigamp/rng.hpp"

namespace pbigamp {

// Separable scalar prior contract: Gaussian-weighted moments, the posterior
// denoiser, the second moment Q0, and a sampler. Everything here is
// stateless and safe to call concurrently; samplers draw from a
// caller-owned Rng.
class Prior {
 public:
  virtual ~Prior() = default;
  virtual double f0(double xh, double xb) const = 0;
  virtual double f1(double xh, double xb) const = 0;
  // mean and variance of x ~ p(x) N(x; xh, xb) / f0
  virtual std::pair<double, double> denoise(double xh, double xb) const = 0;
  virtual double second_moment() const = 0;
  virtual bool symmetric() const { return true; }
  virtual double sample(Rng& rng) const = 0;
  // the density as a generic weight function; with_closed_form=false forces
  // the quadrature path (oracle-equivalence checks)
  virtual WeightFunction weight(bool with_closed_form = true) const = 0;

  virtual void denoise_batch(const double* xh, const double* xb, double* mean,
                             double* var, int n, int threads) const;
};

// (1-rho) delta(x) + rho N(x; 0, 1); closed forms evaluated in the log
// domain, the spike never goes through quadrature.
class BernoulliGaussPrior : public Prior {
 public:
  explicit BernoulliGaussPrior(double rho);
  double rho() const { return rho_; }
  double f0(double xh, double xb) const override;
  double f1(double xh, double xb) const override;
  std::pair<double, double> denoise(double xh, double xb) const override;
  double second_moment() const override { return rho_; }
  double sample(Rng& rng) const override;
  WeightFunction weight(bool with_closed_form = true) const override;

 private:
  double rho_;
};

// Prior backed by an arbitrary weight function through the generic moment
// kernel; plugs into both the solver and the state evolution.
class QuadraturePrior : public Prior {
 public:
  QuadraturePrior(WeightFunction w, double q0,
                  std::function<double(Rng&)> sampler, bool symmetric = true);
  double f0(double xh, double xb) const override;
  double f1(double xh, double xb) const override;
  std::pair<double, double> denoise(double xh, double xb) const override;
  double second_moment() const override { return q0_; }
  bool symmetric() const override { return symmetric_; }
  double sample(Rng& rng) const override;
  WeightFunction weight(bool with_closed_form = true) const override;

 private:
  WeightFunction w_;
  double q0_;
  std::function<double(Rng&)> sampler_;
  bool symmetric_;
};

// Separable output channel contract: f0^Y and the output corrections
// (g_hat, g_bar), plus a sampler y | z.
class Channel {
 public:
  virtual ~Channel() = default;
  virtual double f0(double y, double zh, double zb) const = 0;
  virtual std::pair<double, double> correct(double y, double zh,
                                            double zb) const = 0;
  virtual double sample(double z, Rng& rng) const = 0;
  // spread of y when z has the given variance; sizes the y-domain of the
  // nested state-evolution quadrature
  virtual double y_spread(double z_var) const = 0;
  virtual bool matches(const Channel& other) const = 0;

  virtual void correct_batch(const double* y, const double* zh,
                             const double* zb, double* gh, double* gb, int n,
                             int threads) const;
};

// y = z + N(0, delta)
class AwgnChannel : public Channel {
 public:
  explicit AwgnChannel(double delta);
  double delta() const { return delta_; }
  double f0(double y, double zh, double zb) const override;
  std::pair<double, double> correct(double y, double zh,
                                    double zb) const override;
  double sample(double z, Rng& rng) const override;
  double y_spread(double z_var) const override;
  bool matches(const Channel& other) const override;

 private:
  double delta_;
};

// Channel defined by an arbitrary conditional density p(y|z), evaluated
// through the generic moment kernel. Exercised by tests against the AWGN
// closed forms.
class QuadratureChannel : public Channel {
 public:
  QuadratureChannel(std::function<double(double y, double z)> log_like,
                    std::function<GaussianBelief(double y)> z_envelope,
                    double noise_var,
                    std::function<double(double z, Rng&)> sampler);
  double f0(double y, double zh, double zb) const override;
  std::pair<double, double> correct(double y, double zh,
                                    double zb) const override;
  double sample(double z, Rng& rng) const override;
  double y_spread(double z_var) const override;
  bool matches(const Channel& other) const override;

 private:
  WeightFunction weight_for(double y) const;
  std::function<double(double, double)> log_like_;
  std::function<GaussianBelief(double)> z_envelope_;
  double noise_var_;
  std::function<double(double, Rng&)> sampler_;
};

void sample_prior(const Prior& prior, double* out, int n, Rng& rng);
void sample_channel(const Channel& channel, const double* z, double* y, int n,
                    Rng& rng);

}  // namespace pbigamp
