#pragma once

// Direct transcription of the P-BiG-AMP update equations with explicit
// loops, independent of the solver's fused kernels and contraction order.
// Used as the brute-force oracle for amp_step on tiny instances.

#include <algorithm>
#include <vector>

#include "pbigamp/priors_channels.hpp"
#include "pbigamp/sensing.hpp"

namespace naive {

struct State {
  std::vector<double> uhat, ubar, vhat, vbar;       // t
  std::vector<double> uhat_p, ubar_p, vhat_p, vbar_p;  // t-1
  std::vector<double> ghat, ghat_p;                 // t, t-1
  std::vector<double> Zhat, Zbar, gbar;
  std::vector<double> Ufield, Vfield;               // damped field means
  bool fields = false;
};

// one full update (t -> t+1) per the TAP equations, beta-damped posterior
// means, floors on variances
inline void step(State& s, const pbigamp::SensingOperator& op,
                 const std::vector<double>& Y,
                 const pbigamp::Prior& prior_u, const pbigamp::Prior& prior_v,
                 const pbigamp::Channel& channel, double beta, double floor,
                 double var_cap = 1e12) {
  const int L = op.L(), M = op.M(), P = op.P(), R = op.R();
  auto a = [&](int l, int mu, int p) { return op.at(l, mu, p); };

  // Xbar = ubar vbar^T + ubar (vhat^2)^T + uhat^2 vbar^T ; Xhat = uhat vhat^T
  std::vector<double> Xbar(M * P, 0.0), Xhat(M * P, 0.0);
  for (int mu = 0; mu < M; ++mu)
    for (int p = 0; p < P; ++p)
      for (int r = 0; r < R; ++r) {
        const double ub = s.ubar[mu * R + r], vb = s.vbar[p * R + r];
        const double uh = s.uhat[mu * R + r], vh = s.vhat[p * R + r];
        Xbar[mu * P + p] += ub * vb + ub * vh * vh + uh * uh * vb;
        Xhat[mu * P + p] += uh * vh;
      }

  // Zbar = A^2(Xbar); Zhat = A(Xhat) - ghat_t . (Onsager memory)
  std::vector<double> Zbar(L, 0.0), Zhat(L, 0.0);
  for (int l = 0; l < L; ++l) {
    double zb = 0.0, zh = 0.0;
    for (int mu = 0; mu < M; ++mu)
      for (int p = 0; p < P; ++p) {
        zb += a(l, mu, p) * a(l, mu, p) * Xbar[mu * P + p];
        zh += a(l, mu, p) * Xhat[mu * P + p];
      }
    double ons = 0.0;
    for (int r = 0; r < R; ++r) {
      for (int mu = 0; mu < M; ++mu) {
        double cur = 0.0, prev = 0.0;
        for (int p = 0; p < P; ++p) {
          cur += a(l, mu, p) * s.vhat[p * R + r];
          prev += a(l, mu, p) * s.vhat_p[p * R + r];
        }
        ons += s.ubar[mu * R + r] * cur * prev;
      }
      for (int p = 0; p < P; ++p) {
        double cur = 0.0, prev = 0.0;
        for (int mu = 0; mu < M; ++mu) {
          cur += a(l, mu, p) * s.uhat[mu * R + r];
          prev += a(l, mu, p) * s.uhat_p[mu * R + r];
        }
        ons += s.vbar[p * R + r] * cur * prev;
      }
    }
    Zhat[l] = zh - s.ghat[l] * ons;
    Zbar[l] = std::max(zb, floor);
  }

  std::vector<double> ghat_new(L), gbar_new(L);
  for (int l = 0; l < L; ++l) {
    const auto [gh, gb] = channel.correct(Y[l], Zhat[l], Zbar[l]);
    ghat_new[l] = gh;
    gbar_new[l] = gb;
  }

  // U side
  std::vector<double> uhat_new(M * R), ubar_new(M * R),
      Ufield_new(M * R);
  for (int mu = 0; mu < M; ++mu)
    for (int r = 0; r < R; ++r) {
      double sum_den = 0.0, sum_lin = 0.0, sum_self = 0.0, sum_mem = 0.0;
      for (int l = 0; l < L; ++l) {
        double F = 0.0, G = 0.0, Gp = 0.0;
        for (int p = 0; p < P; ++p) {
          F += a(l, mu, p) * s.vhat[p * R + r];
          G += a(l, mu, p) * a(l, mu, p) * s.vbar[p * R + r];
          Gp += a(l, mu, p) * a(l, mu, p) * s.vbar_p[p * R + r];
        }
        sum_den += (F * F + G) * gbar_new[l] + G * ghat_new[l] * ghat_new[l];
        sum_lin += F * ghat_new[l];
        sum_self += F * F * gbar_new[l];
        sum_mem += Gp * ghat_new[l] * s.ghat[l];
      }
      const double d = std::min(sum_den, -1.0 / var_cap);
      const double Ub = std::max(-1.0 / d, floor);
      double Uh = Ub * (sum_lin - s.uhat[mu * R + r] * sum_self -
                        s.uhat_p[mu * R + r] * sum_mem);
      if (s.fields) Uh = beta * Uh + (1.0 - beta) * s.Ufield[mu * R + r];
      Ufield_new[mu * R + r] = Uh;
      const auto [mh, vb] = prior_u.denoise(Uh, Ub);
      uhat_new[mu * R + r] = mh;
      ubar_new[mu * R + r] = std::max(vb, floor);
    }

  // V side
  std::vector<double> vhat_new(P * R), vbar_new(P * R),
      Vfield_new(P * R);
  for (int p = 0; p < P; ++p)
    for (int r = 0; r < R; ++r) {
      double sum_den = 0.0, sum_lin = 0.0, sum_self = 0.0, sum_mem = 0.0;
      for (int l = 0; l < L; ++l) {
        double F = 0.0, G = 0.0, Gp = 0.0;
        for (int mu = 0; mu < M; ++mu) {
          F += a(l, mu, p) * s.uhat[mu * R + r];
          G += a(l, mu, p) * a(l, mu, p) * s.ubar[mu * R + r];
          Gp += a(l, mu, p) * a(l, mu, p) * s.ubar_p[mu * R + r];
        }
        sum_den += (F * F + G) * gbar_new[l] + G * ghat_new[l] * ghat_new[l];
        sum_lin += F * ghat_new[l];
        sum_self += F * F * gbar_new[l];
        sum_mem += Gp * ghat_new[l] * s.ghat[l];
      }
      const double d = std::min(sum_den, -1.0 / var_cap);
      const double Vb = std::max(-1.0 / d, floor);
      double Vh = Vb * (sum_lin - s.vhat[p * R + r] * sum_self -
                        s.vhat_p[p * R + r] * sum_mem);
      if (s.fields) Vh = beta * Vh + (1.0 - beta) * s.Vfield[p * R + r];
      Vfield_new[p * R + r] = Vh;
      const auto [mh, vb] = prior_v.denoise(Vh, Vb);
      vhat_new[p * R + r] = mh;
      vbar_new[p * R + r] = std::max(vb, floor);
    }

  s.Ufield = Ufield_new;
  s.Vfield = Vfield_new;
  s.fields = true;
  s.uhat_p = s.uhat;
  s.ubar_p = s.ubar;
  s.vhat_p = s.vhat;
  s.vbar_p = s.vbar;
  s.ghat_p = s.ghat;
  s.uhat = uhat_new;
  s.ubar = ubar_new;
  s.vhat = vhat_new;
  s.vbar = vbar_new;
  s.ghat = ghat_new;
  s.gbar = gbar_new;
  s.Zhat = Zhat;
  s.Zbar = Zbar;
}

}  // namespace naive
