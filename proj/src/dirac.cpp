#include "dirwave/dirac.hpp"

#include <array>
#include <complex>

namespace dirwave::dirac {

namespace {

using cd = std::complex<double>;

Matrix block_offdiag(const Eigen::Matrix2cd &s) {
  Matrix m = Matrix::Zero();
  m.topRightCorner<2, 2>() = s;
  m.bottomLeftCorner<2, 2>() = s;
  return m;
}

struct Tables {
  std::array<Matrix, 3> alpha;
  Matrix beta;
  std::array<Matrix, 3> sigma;

  Tables() {
    const cd i{0.0, 1.0};
    Eigen::Matrix2cd s1, s2, s3;
    s1 << 0.0, 1.0, 1.0, 0.0;
    s2 << 0.0, -i, i, 0.0;
    s3 << 1.0, 0.0, 0.0, -1.0;
    alpha = {block_offdiag(s1), block_offdiag(s2), block_offdiag(s3)};
    beta = Matrix::Zero();
    beta.diagonal() << 1.0, 1.0, -1.0, -1.0;
    sigma = {alpha[1] * alpha[2], alpha[2] * alpha[0], alpha[0] * alpha[1]};
  }
};

const Tables &tables() {
  static const Tables t;
  return t;
}

} // namespace

const Matrix &alpha(int i) { return tables().alpha.at(i); }
const Matrix &beta() { return tables().beta; }
const Matrix &sigma(int n) { return tables().sigma.at(n); }

} // namespace dirwave::dirac
