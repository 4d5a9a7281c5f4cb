#include "dirwave/quadrature.hpp"

#include "dirwave/error.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

namespace dirwave {

GaussHermite::GaussHermite(int order) {
  if (order < 1 || order > 512)
    throw Error(ErrorCode::invalid_argument, "Gauss-Hermite order must be in [1, 512]");
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(order, order);
  for (int k = 1; k < order; ++k)
    J(k - 1, k) = J(k, k - 1) = std::sqrt(0.5 * k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  nodes.resize(order);
  weights.resize(order);
  const double mu0 = std::sqrt(std::numbers::pi);
  for (int i = 0; i < order; ++i) {
    nodes[i] = es.eigenvalues()[i];
    const double v = es.eigenvectors()(0, i);
    weights[i] = mu0 * v * v;
  }
  // Symmetrize against eigensolver round-off.
  for (int i = 0; i < order / 2; ++i) {
    const int j = order - 1 - i;
    const double x = 0.5 * (nodes[j] - nodes[i]);
    const double w = 0.5 * (weights[i] + weights[j]);
    nodes[i] = -x;
    nodes[j] = x;
    weights[i] = weights[j] = w;
  }
  if (order % 2 == 1)
    nodes[order / 2] = 0.0;
}

} // namespace dirwave
