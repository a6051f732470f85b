#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "pbigamp/sensing.hpp"

namespace pbigamp {

// Case-study instance parameters. Generating and assumed parameters are
// carried separately; Bayes-optimal paths assert they match.
struct InstanceParams {
  int M = 200;
  int P = 200;
  int R = 1;
  double alpha = 0.5;  // global rate, L = round(2 alpha M R)
  double rho_u0 = 0.1, rho_v0 = 0.1;
  double delta0 = 1e-12;
  double rho_u = 0.1, rho_v = 0.1;
  double delta = 1e-12;
  std::uint64_t seed = 1;
};

struct ProblemInstance {
  InstanceParams params;
  int L = 0;
  SensingOperator op;
  std::vector<double> U, V;  // ground truth, M x R and P x R
  std::vector<double> Z;     // A(U V^T)
  std::vector<double> Y;     // observations
  bool has_truth = true;
};

inline int measurement_count(double alpha, int M, int R) {
  return static_cast<int>(std::lround(2.0 * alpha * M * R));
}

// Samples U, V from the generating priors, builds the operator, computes
// Z = A(U V^T) and draws Y through the generating channel.
ProblemInstance generate_instance(const InstanceParams& params);

}  // namespace pbigamp
