#pragma once

#include <Eigen/Dense>

namespace gkpstab {

// Nodes and weights on [-1, 1].
struct QuadratureRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

// n-point Gauss-Legendre rule; cached, thread-safe.
const QuadratureRule& gauss_legendre(int n);

}  // namespace gkpstab
