#pragma once

#include <vector>

namespace dirwave {

// Gauss-Hermite rule for weight exp(-x^2) (Golub-Welsch).
struct GaussHermite {
  std::vector<double> nodes;
  std::vector<double> weights;

  explicit GaussHermite(int order);
  int order() const { return static_cast<int>(nodes.size()); }
};

} // namespace dirwave
