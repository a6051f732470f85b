#pragma once

#include <cstdint>
#include <vector>

namespace pbigamp {

// Dense random measurement operator a_l^{mu p}, entries i.i.d.
// N(0, 1/(R M P)), regenerable from (dims, seed). Rows are filled from
// per-row derived seeds, so construction parallelizes without changing the
// realization. Immutable after construction; all maps are read-only and
// parallel over the l index.
class SensingOperator {
 public:
  SensingOperator(int L, int M, int P, int R, std::uint64_t seed);

  int L() const { return L_; }
  int M() const { return M_; }
  int P() const { return P_; }
  int R() const { return R_; }
  std::uint64_t seed() const { return seed_; }
  const std::vector<double>& entries() const { return a_; }
  double at(int l, int mu, int p) const {
    return a_[(static_cast<std::size_t>(l) * M_ + mu) * P_ + p];
  }

  // z_l = sum_{mu,p} a_l^{mu p} X_{mu p}, X row-major M x P
  void apply(const double* X, double* z, int threads = 1) const;
  // same with coefficients squared elementwise (squares formed on the fly)
  void apply_squared(const double* Xbar, double* z, int threads = 1) const;

  // [A_U(v)]_{l mu} = sum_p a_l^{mu p} v_p, out row-major L x M
  void apply_AU(const double* v, double* out, int threads = 1) const;
  // [A_V(u)]_{l p} = sum_mu a_l^{mu p} u_mu, out row-major L x P
  void apply_AV(const double* u, double* out, int threads = 1) const;
  void apply_AU_squared(const double* v, double* out, int threads = 1) const;
  void apply_AV_squared(const double* u, double* out, int threads = 1) const;

  // row-wise application on the R columns of V (P x R): out[(l*M+mu)*R + s]
  void apply_AU_rowwise(const double* V, int R, double* out,
                        int threads = 1) const;
  void apply_AV_rowwise(const double* U, int R, double* out,
                        int threads = 1) const;
  void apply_AU_squared_rowwise(const double* V, int R, double* out,
                                int threads = 1) const;
  void apply_AV_squared_rowwise(const double* U, int R, double* out,
                                int threads = 1) const;

  // The four per-iteration maps of the solver in one sweep over the
  // coefficients: AUv = A_U(vhat), AU2vb = A_U^2(vbar), AVu = A_V(uhat),
  // AV2ub = A_V^2(ubar). Bandwidth-bound; this is the hot kernel.
  void fused_maps(const double* vhat, const double* vbar, const double* uhat,
                  const double* ubar, int R, double* AUv, double* AU2vb,
                  double* AVu, double* AV2ub, int threads = 1) const;

 private:
  int L_, M_, P_, R_;
  std::uint64_t seed_;
  std::vector<double> a_;
};

// Naive triple-loop reference implementations, kept for tests and the
// kernel benchmark.
namespace serial_ref {
void apply(const SensingOperator& op, const double* X, double* z);
void apply_squared(const SensingOperator& op, const double* X, double* z);
void apply_AU(const SensingOperator& op, const double* v, double* out);
void apply_AV(const SensingOperator& op, const double* u, double* out);
void apply_AU_squared(const SensingOperator& op, const double* v, double* out);
void apply_AV_squared(const SensingOperator& op, const double* u, double* out);
void apply_AU_rowwise(const SensingOperator& op, const double* V, int R,
                      double* out);
void apply_AV_rowwise(const SensingOperator& op, const double* U, int R,
                      double* out);
void apply_AU_squared_rowwise(const SensingOperator& op, const double* V,
                              int R, double* out);
void apply_AV_squared_rowwise(const SensingOperator& op, const double* U,
                              int R, double* out);
void fused_maps(const SensingOperator& op, const double* vhat,
                const double* vbar, const double* uhat, const double* ubar,
                int R, double* AUv, double* AU2vb, double* AVu, double* AV2ub);
}  // namespace serial_ref

}  // namespace pbigamp
