#include "pbigamp/instance.hpp"

#include <cmath>
#include <stdexcept>

#include "pbigamp/priors_channels.hpp"
#include "pbigamp/rng.hpp"

namespace pbigamp {

ProblemInstance generate_instance(const InstanceParams& params) {
  if (params.M < 1 || params.P < 1 || params.R < 1)
    throw std::invalid_argument("instance dimensions must be positive");
  const int L = measurement_count(params.alpha, params.M, params.R);
  if (L < 1) throw std::invalid_argument("measurement count must be positive");

  ProblemInstance inst{params,
                       L,
                       SensingOperator(L, params.M, params.P, params.R,
                                       seed_mix(params.seed, 0xA0u)),
                       {},
                       {},
                       {},
                       {},
                       true};

  const BernoulliGaussPrior pu(params.rho_u0), pv(params.rho_v0);
  const AwgnChannel channel(params.delta0);

  inst.U.resize(static_cast<std::size_t>(params.M) * params.R);
  inst.V.resize(static_cast<std::size_t>(params.P) * params.R);
  Rng rng_u(seed_mix(params.seed, 0xB0u));
  Rng rng_v(seed_mix(params.seed, 0xC0u));
  sample_prior(pu, inst.U.data(), static_cast<int>(inst.U.size()), rng_u);
  sample_prior(pv, inst.V.data(), static_cast<int>(inst.V.size()), rng_v);

  std::vector<double> X(static_cast<std::size_t>(params.M) * params.P, 0.0);
  for (int mu = 0; mu < params.M; ++mu)
    for (int p = 0; p < params.P; ++p) {
      double s = 0.0;
      for (int r = 0; r < params.R; ++r)
        s += inst.U[mu * params.R + r] * inst.V[p * params.R + r];
      X[static_cast<std::size_t>(mu) * params.P + p] = s;
    }

  inst.Z.resize(L);
  inst.op.apply(X.data(), inst.Z.data());
  inst.Y.resize(L);
  Rng rng_y(seed_mix(params.seed, 0xD0u));
  sample_channel(channel, inst.Z.data(), inst.Y.data(), L, rng_y);
  return inst;
}

}  // namespace pbigamp
