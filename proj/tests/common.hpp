#ifndef QMS_TESTS_COMMON_HPP
#define QMS_TESTS_COMMON_HPP

#include <cmath>
#include <vector>

#include "qms/qms.hpp"

namespace qt {

using namespace qms;

inline Matrix eye(Index n) { return Matrix::Identity(n, n); }

inline Matrix sigma_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

inline Matrix sigma_y() {
  Matrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

inline Matrix sigma_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

inline Matrix diag2(Complex a, Complex b) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

inline CPMap identity_channel(Index n) { return CPMap::make({eye(n)}); }

inline CPMap unitary_channel(const Matrix& u) { return CPMap::make({u}); }

// x -> (1 - p) x + p tr(x)/2 I on M_2, Kraus weights sqrt(1 - 3p/4), sqrt(p/4).
inline CPMap depolarizing(double p) {
  std::vector<Matrix> kraus;
  kraus.push_back(std::sqrt(1.0 - 0.75 * p) * eye(2));
  for (const auto& s : pauli_basis()) kraus.push_back(std::sqrt(0.25 * p) * s);
  return CPMap::make(std::move(kraus));
}

// kraus { sigma_x diag(1,0), sigma_x diag(0,1) }: dephase in the z basis, then flip
inline CPMap dephase_then_flip() {
  return CPMap::make({sigma_x() * diag2(1, 0), sigma_x() * diag2(0, 1)});
}

// Heisenberg form of amplitude damping toward |0><0|: l_i = K_i^dag of the
// Schroedinger family K_0 = diag(1, sqrt(1-g)), K_1 = sqrt(g) |0><1|.
inline CPMap amplitude_damping(double gamma) {
  Matrix k0 = diag2(1.0, std::sqrt(1.0 - gamma));
  Matrix k1 = Matrix::Zero(2, 2);
  k1(0, 1) = std::sqrt(gamma);
  return CPMap::make({k0.adjoint(), k1.adjoint()});
}

inline DensityState max_mixed(Index n) { return DensityState::make(eye(n) / double(n)); }

// channel that acts block-diagonally on M_2 + M_2 inside M_4,
// conjugating block 1 by u1 and block 2 by u2
inline CPMap two_block_unitary(const Matrix& u1, const Matrix& u2) {
  Matrix k = Matrix::Zero(4, 4);
  k.topLeftCorner(2, 2) = u1;
  k.bottomRightCorner(2, 2) = u2;
  return CPMap::make({k});
}

}  // namespace qt

#endif
