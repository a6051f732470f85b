#include "pbigamp/sensing.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

#include "pbigamp/rng.hpp"

namespace pbigamp {

namespace {
constexpr int kMaxRank = 8;
}

SensingOperator::SensingOperator(int L, int M, int P, int R,
                                 std::uint64_t seed)
    : L_(L), M_(M), P_(P), R_(R), seed_(seed) {
  if (L < 1 || M < 1 || P < 1 || R < 1)
    throw std::invalid_argument("operator dimensions must be positive");
  if (R > kMaxRank) throw std::invalid_argument("rank too large");
  a_.resize(static_cast<std::size_t>(L) * M * P);
  const double sd = 1.0 / std::sqrt(static_cast<double>(R) * M * P);
#pragma omp parallel for schedule(static)
  for (int l = 0; l < L_; ++l) {
    Rng rng(seed_mix(seed_, 0x5e11u, static_cast<std::uint64_t>(l)));
    double* row = a_.data() + static_cast<std::size_t>(l) * M_ * P_;
    for (int i = 0; i < M_ * P_; ++i) row[i] = sd * rng.gaussian();
  }
}

void SensingOperator::apply(const double* X, double* z, int threads) const {
  const std::size_t n = static_cast<std::size_t>(M_) * P_;
#pragma omp parallel for schedule(static) num_threads(threads) if (threads > 1)
  for (int l = 0; l < L_; ++l) {
    const double* row = a_.data() + l * n;
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += row[i] * X[i];
    z[l] = s;
  }
}

void SensingOperator::apply_squared(const double* X, double* z,
                                    int threads) const {
  const std::size_t n = static_cast<std::size_t>(M_) * P_;
#pragma omp parallel for schedule(static) num_threads(threads) if (threads > 1)
  for (int l = 0; l < L_; ++l) {
    const double* row = a_.data() + l * n;
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += row[i] * row[i] * X[i];
    z[l] = s;
  }
}

void SensingOperator::apply_AU(const double* v, double* out,
                               int threads) const {
  apply_AU_rowwise(v, 1, out, threads);
}

void SensingOperator::apply_AV(const double* u, double* out,
                               int threads) const {
  apply_AV_rowwise(u, 1, out, threads);
}

void SensingOperator::apply_AU_squared(const double* v, double* out,
                                       int threads) const {
  apply_AU_squared_rowwise(v, 1, out, threads);
}

void SensingOperator::apply_AV_squared(const double* u, double* out,
                                       int threads) const {
  apply_AV_squared_rowwise(u, 1, out, threads);
}

void SensingOperator::apply_AU_rowwise(const double* V, int R, double* out,
                                       int threads) const {
  if (R > kMaxRank) throw std::invalid_argument("rank too large");
#pragma omp parallel for schedule(static) num_threads(threads) if (threads > 1)
  for (int l = 0; l < L_; ++l) {
    for (int mu = 0; mu < M_; ++mu) {
      const double* row = a_.data() + (static_cast<std::size_t>(l) * M_ + mu) * P_;
      double acc[kMaxRank] = {0};
      for (int p = 0; p < P_; ++p)
        for (int s = 0; s < R; ++s) acc[s] += row[p] * V[p * R + s];
      for (int s = 0; s < R; ++s)
        out[(static_cast<std::size_t>(l) * M_ + mu) * R + s] = acc[s];
    }
  }
}

void SensingOperator::apply_AU_squared_rowwise(const double* V, int R,
                                               double* out,
                                               int threads) const {
  if (R > kMaxRank) throw std::invalid_argument("rank too large");
#pragma omp parallel for schedule(static) num_threads(threads) if (threads > 1)
  for (int l = 0; l < L_; ++l) {
    for (int mu = 0; mu < M_; ++mu) {
      const double* row = a_.data() + (static_cast<std::size_t>(l) * M_ + mu) * P_;
      double acc[kMaxRank] = {0};
      for (int p = 0; p < P_; ++p)
        for (int s = 0; s < R; ++s)
          acc[s] += row[p] * row[p] * V[p * R + s];
      for (int s = 0; s < R; ++s)
        out[(static_cast<std::size_t>(l) * M_ + mu) * R + s] = acc[s];
    }
  }
}

void SensingOperator::apply_AV_rowwise(const double* U, int R, double* out,
                                       int threads) const {
  if (R > kMaxRank) throw std::invalid_argument("rank too large");
#pragma omp parallel for schedule(static) num_threads(threads) if (threads > 1)
  for (int l = 0; l < L_; ++l) {
    double* o = out + static_cast<std::size_t>(l) * P_ * R;
    std::memset(o, 0, sizeof(double) * P_ * R);
    for (int mu = 0; mu < M_; ++mu) {
      const double* row = a_.data() + (static_cast<std::size_t>(l) * M_ + mu) * P_;
      for (int p = 0; p < P_; ++p)
        for (int s = 0; s < R; ++s) o[p * R + s] += row[p] * U[mu * R + s];
    }
  }
}

void SensingOperator::apply_AV_squared_rowwise(const double* U, int R,
                                               double* out,
                                               int threads) const {
  if (R > kMaxRank) throw std::invalid_argument("rank too large");
#pragma omp parallel for schedule(static) num_threads(threads) if (threads > 1)
  for (int l = 0; l < L_; ++l) {
    double* o = out + static_cast<std::size_t>(l) * P_ * R;
    std::memset(o, 0, sizeof(double) * P_ * R);
    for (int mu = 0; mu < M_; ++mu) {
      const double* row = a_.data() + (static_cast<std::size_t>(l) * M_ + mu) * P_;
      for (int p = 0; p < P_; ++p)
        for (int s = 0; s < R; ++s)
          o[p * R + s] += row[p] * row[p] * U[mu * R + s];
    }
  }
}

void SensingOperator::fused_maps(const double* vhat, const double* vbar,
                                 const double* uhat, const double* ubar,
                                 int R, double* AUv, double* AU2vb,
                                 double* AVu, double* AV2ub,
                                 int threads) const {
  if (R > kMaxRank) throw std::invalid_argument("rank too large");
#pragma omp parallel for schedule(static) num_threads(threads) if (threads > 1)
  for (int l = 0; l < L_; ++l) {
    double* avu = AVu + static_cast<std::size_t>(l) * P_ * R;
    double* av2 = AV2ub + static_cast<std::size_t>(l) * P_ * R;
    std::memset(avu, 0, sizeof(double) * P_ * R);
    std::memset(av2, 0, sizeof(double) * P_ * R);
    for (int mu = 0; mu < M_; ++mu) {
      const double* row = a_.data() + (static_cast<std::size_t>(l) * M_ + mu) * P_;
      if (R == 1) {
        const double uh = uhat[mu], ub = ubar[mu];
        double acc = 0.0, acc2 = 0.0;
        for (int p = 0; p < P_; ++p) {
          const double t = row[p];
          const double t2 = t * t;
          acc += t * vhat[p];
          acc2 += t2 * vbar[p];
          avu[p] += t * uh;
          av2[p] += t2 * ub;
        }
        AUv[static_cast<std::size_t>(l) * M_ + mu] = acc;
        AU2vb[static_cast<std::size_t>(l) * M_ + mu] = acc2;
      } else {
        double acc[kMaxRank] = {0}, acc2[kMaxRank] = {0};
        for (int p = 0; p < P_; ++p) {
          const double t = row[p];
          const double t2 = t * t;
          for (int s = 0; s < R; ++s) {
            acc[s] += t * vhat[p * R + s];
            acc2[s] += t2 * vbar[p * R + s];
            avu[p * R + s] += t * uhat[mu * R + s];
            av2[p * R + s] += t2 * ubar[mu * R + s];
          }
        }
        for (int s = 0; s < R; ++s) {
          AUv[(static_cast<std::size_t>(l) * M_ + mu) * R + s] = acc[s];
          AU2vb[(static_cast<std::size_t>(l) * M_ + mu) * R + s] = acc2[s];
        }
      }
    }
  }
}

namespace serial_ref {

void apply(const SensingOperator& op, const double* X, double* z) {
  for (int l = 0; l < op.L(); ++l) {
    double s = 0.0;
    for (int mu = 0; mu < op.M(); ++mu)
      for (int p = 0; p < op.P(); ++p)
        s += op.at(l, mu, p) * X[mu * op.P() + p];
    z[l] = s;
  }
}

void apply_squared(const SensingOperator& op, const double* X, double* z) {
  for (int l = 0; l < op.L(); ++l) {
    double s = 0.0;
    for (int mu = 0; mu < op.M(); ++mu)
      for (int p = 0; p < op.P(); ++p) {
        const double a = op.at(l, mu, p);
        s += a * a * X[mu * op.P() + p];
      }
    z[l] = s;
  }
}

void apply_AU(const SensingOperator& op, const double* v, double* out) {
  apply_AU_rowwise(op, v, 1, out);
}

void apply_AV(const SensingOperator& op, const double* u, double* out) {
  apply_AV_rowwise(op, u, 1, out);
}

void apply_AU_squared(const SensingOperator& op, const double* v,
                      double* out) {
  apply_AU_squared_rowwise(op, v, 1, out);
}

void apply_AV_squared(const SensingOperator& op, const double* u,
                      double* out) {
  apply_AV_squared_rowwise(op, u, 1, out);
}

void apply_AU_rowwise(const SensingOperator& op, const double* V, int R,
                      double* out) {
  for (int l = 0; l < op.L(); ++l)
    for (int mu = 0; mu < op.M(); ++mu)
      for (int s = 0; s < R; ++s) {
        double acc = 0.0;
        for (int p = 0; p < op.P(); ++p)
          acc += op.at(l, mu, p) * V[p * R + s];
        out[(static_cast<std::size_t>(l) * op.M() + mu) * R + s] = acc;
      }
}

void apply_AV_rowwise(const SensingOperator& op, const double* U, int R,
                      double* out) {
  for (int l = 0; l < op.L(); ++l)
    for (int p = 0; p < op.P(); ++p)
      for (int s = 0; s < R; ++s) {
        double acc = 0.0;
        for (int mu = 0; mu < op.M(); ++mu)
          acc += op.at(l, mu, p) * U[mu * R + s];
        out[(static_cast<std::size_t>(l) * op.P() + p) * R + s] = acc;
      }
}

void apply_AU_squared_rowwise(const SensingOperator& op, const double* V,
                              int R, double* out) {
  for (int l = 0; l < op.L(); ++l)
    for (int mu = 0; mu < op.M(); ++mu)
      for (int s = 0; s < R; ++s) {
        double acc = 0.0;
        for (int p = 0; p < op.P(); ++p) {
          const double a = op.at(l, mu, p);
          acc += a * a * V[p * R + s];
        }
        out[(static_cast<std::size_t>(l) * op.M() + mu) * R + s] = acc;
      }
}

void apply_AV_squared_rowwise(const SensingOperator& op, const double* U,
                              int R, double* out) {
  for (int l = 0; l < op.L(); ++l)
    for (int p = 0; p < op.P(); ++p)
      for (int s = 0; s < R; ++s) {
        double acc = 0.0;
        for (int mu = 0; mu < op.M(); ++mu) {
          const double a = op.at(l, mu, p);
          acc += a * a * U[mu * R + s];
        }
        out[(static_cast<std::size_t>(l) * op.P() + p) * R + s] = acc;
      }
}

void fused_maps(const SensingOperator& op, const double* vhat,
                const double* vbar, const double* uhat, const double* ubar,
                int R, double* AUv, double* AU2vb, double* AVu,
                double* AV2ub) {
  apply_AU_rowwise(op, vhat, R, AUv);
  apply_AU_squared_rowwise(op, vbar, R, AU2vb);
  apply_AV_rowwise(op, uhat, R, AVu);
  apply_AV_squared_rowwise(op, ubar, R, AV2ub);
}

}  // namespace serial_ref

}  // namespace pbigamp
