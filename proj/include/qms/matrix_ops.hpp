#ifndef QMS_MATRIX_OPS_HPP
#define QMS_MATRIX_OPS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include <unsupported/Eigen/KroneckerProduct>

#include "qms/types.hpp"

namespace qms {

/// Column-stacking vectorization: vec(x)[c*n + r] = x(r, c).
/// Every superoperator matrix in this library commits to this order.
inline Vector vectorize(const Matrix& x) {
  return Eigen::Map<const Vector>(x.data(), x.size());
}

inline Matrix devectorize(const Vector& v, Index n) {
  if (v.size() != n * n) throw DimensionError("devectorize: length is not n^2");
  return Eigen::Map<const Matrix>(v.data(), n, n);
}

inline Complex hs_inner(const Matrix& a, const Matrix& b) {
  return (a.adjoint() * b).trace();
}

inline double hs_norm(const Matrix& a) { return a.norm(); }

inline bool is_hermitian(const Matrix& a, double eps = tol::herm) {
  return (a - a.adjoint()).norm() <= eps * std::max(1.0, a.norm());
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  return Eigen::kroneckerProduct(a, b).eval();
}

inline double trace_norm(const Matrix& a) {
  return a.jacobiSvd().singularValues().sum();
}

inline double operator_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  return a.jacobiSvd().singularValues().maxCoeff();
}

inline Matrix matrix_power(const Matrix& a, std::uint64_t k) {
  Matrix result = Matrix::Identity(a.rows(), a.cols());
  Matrix base = a;
  while (k > 0) {
    if (k & 1u) result = result * base;
    k >>= 1u;
    if (k > 0) base = base * base;
  }
  return result;
}

namespace detail {
inline Eigen::SelfAdjointEigenSolver<Matrix> hermitian_eigs(const Matrix& a) {
  Matrix h = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  if (es.info() != Eigen::Success) throw CheckError("hermitian eigensolver failed");
  return es;
}
}  // namespace detail

inline Matrix hermitian_sqrt(const Matrix& a) {
  auto es = detail::hermitian_eigs(a);
  RealVector vals = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * vals.asDiagonal() * es.eigenvectors().adjoint();
}

inline Matrix hermitian_inv_sqrt(const Matrix& a, double floor_eps = 1e-14) {
  auto es = detail::hermitian_eigs(a);
  RealVector vals = es.eigenvalues();
  RealVector inv(vals.size());
  for (Index i = 0; i < vals.size(); ++i) {
    if (vals(i) <= floor_eps)
      throw ValidationError("hermitian_inv_sqrt: matrix is singular within tolerance");
    inv(i) = 1.0 / std::sqrt(vals(i));
  }
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().adjoint();
}

inline Matrix hermitian_log(const Matrix& a, double floor_eps = 1e-14) {
  auto es = detail::hermitian_eigs(a);
  RealVector vals = es.eigenvalues();
  RealVector lg(vals.size());
  for (Index i = 0; i < vals.size(); ++i) {
    if (vals(i) <= floor_eps)
      throw ValidationError("hermitian_log: matrix is singular within tolerance");
    lg(i) = std::log(vals(i));
  }
  return es.eigenvectors() * lg.asDiagonal() * es.eigenvectors().adjoint();
}

inline double min_eigenvalue(const Matrix& a) {
  return detail::hermitian_eigs(a).eigenvalues().minCoeff();
}

/// Orthonormal basis of ker(m), singular values below eps * max(s_max, 1).
inline std::vector<Vector> kernel_basis(const Matrix& m, double eps = tol::rank) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  double scale = sv.size() > 0 ? std::max(sv(0), 1.0) : 1.0;
  std::vector<Vector> out;
  for (Index i = 0; i < svd.matrixV().cols(); ++i) {
    if (i >= sv.size() || sv(i) <= eps * scale) out.push_back(svd.matrixV().col(i));
  }
  return out;
}

inline int kernel_dim(const Matrix& m, double eps = tol::rank) {
  return static_cast<int>(kernel_basis(m, eps).size());
}

inline std::vector<Matrix> pauli_basis() {
  Matrix sx(2, 2), sy(2, 2), sz(2, 2);
  sx << 0, 1, 1, 0;
  sy << 0, Complex(0, -1), Complex(0, 1), 0;
  sz << 1, 0, 0, -1;
  return {sx, sy, sz};
}

/// HS-orthonormal matrix-unit basis of M_n, ordered E_00, E_10, ..., E_{n-1,n-1}.
inline std::vector<Matrix> matrix_unit_basis(Index n) {
  std::vector<Matrix> out;
  out.reserve(static_cast<std::size_t>(n * n));
  for (Index c = 0; c < n; ++c)
    for (Index r = 0; r < n; ++r) {
      Matrix e = Matrix::Zero(n, n);
      e(r, c) = 1.0;
      out.push_back(e);
    }
  return out;
}

}  // namespace qms

#endif
