#pragma once

#include <Eigen/Core>

#include <string_view>

namespace dirwave::dirac {

using Spinor = Eigen::Vector4cd;
using Matrix = Eigen::Matrix4cd;

// Dirac-Pauli representation: beta = diag(1, 1, -1, -1), alpha_i = [[0, s_i], [s_i, 0]].
inline constexpr std::string_view representation = "dirac-pauli";

const Matrix &alpha(int i); // i = 0, 1, 2 for x, y, z
const Matrix &beta();
// sigma_1 = alpha_2 alpha_3, sigma_2 = alpha_3 alpha_1, sigma_3 = alpha_1 alpha_2
// (anti-Hermitian; spin is -(i/2) <sigma_n>).
const Matrix &sigma(int n);

} // namespace dirwave::dirac
