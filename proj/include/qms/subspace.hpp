#ifndef QMS_SUBSPACE_HPP
#define QMS_SUBSPACE_HPP

#include <utility>
#include <vector>

#include "qms/matrix_ops.hpp"
#include "qms/types.hpp"

namespace qms {

/// A linear subspace of M_n carried by an HS-orthonormal basis of matrices.
/// Membership is always decided by the HS-projection residual, never by
/// elimination on raw entries.
class OperatorSubspace {
 public:
  explicit OperatorSubspace(Index ambient_dim) : n_(ambient_dim) {
    if (ambient_dim <= 0) throw DimensionError("OperatorSubspace: ambient dim must be positive");
  }

  static OperatorSubspace span_of(Index n, const std::vector<Matrix>& gens,
                                  double eps = tol::gram) {
    OperatorSubspace s(n);
    for (const auto& g : gens) s.try_extend(g, eps);
    return s;
  }

  Index ambient_dim() const { return n_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  const std::vector<Matrix>& basis() const { return basis_; }

  Matrix project(const Matrix& x) const {
    Matrix p = Matrix::Zero(n_, n_);
    for (const auto& b : basis_) p += hs_inner(b, x) * b;
    return p;
  }

  double residual(const Matrix& x) const { return (x - project(x)).norm(); }

  bool contains(const Matrix& x, double eps = tol::closure) const {
    return residual(x) <= eps * std::max(1.0, x.norm());
  }

  /// Gram-Schmidt append with one reorthogonalization pass.
  /// Returns true when x contributed a new direction.
  bool try_extend(const Matrix& x, double eps = tol::gram) {
    if (x.rows() != n_ || x.cols() != n_) throw DimensionError("try_extend: ambient mismatch");
    Matrix r = x;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : basis_) r -= hs_inner(b, r) * b;
    double nr = r.norm();
    if (nr <= eps * std::max(1.0, x.norm())) return false;
    basis_.push_back(r / nr);
    return true;
  }

  /// Identity in span, closed under adjoints and products.
  bool is_star_algebra(double eps = tol::closure) const {
    if (!contains(Matrix::Identity(n_, n_), eps)) return false;
    for (const auto& b : basis_)
      if (!contains(b.adjoint().eval(), eps)) return false;
    for (const auto& a : basis_)
      for (const auto& b : basis_)
        if (!contains((a * b).eval(), eps)) return false;
    return true;
  }

 private:
  Index n_;
  std::vector<Matrix> basis_;
};

/// Smallest HS-closed subspace containing I, the generators, their adjoints,
/// and closed under products. Sweeps products until the dimension stabilizes;
/// the chain is bounded by n^2.
inline OperatorSubspace algebra_closure(const std::vector<Matrix>& generators,
                                        double eps = tol::closure) {
  if (generators.empty()) throw ValidationError("algebra_closure: no generators");
  Index n = generators.front().rows();
  for (const auto& g : generators)
    if (g.rows() != n || g.cols() != n)
      throw DimensionError("algebra_closure: generators must share ambient dimension");

  OperatorSubspace s(n);
  s.try_extend(Matrix::Identity(n, n), eps);
  for (const auto& g : generators) {
    s.try_extend(g, eps);
    s.try_extend(g.adjoint().eval(), eps);
  }
  for (Index sweep = 0; sweep < n * n + 1; ++sweep) {
    bool added = false;
    std::size_t k = s.basis().size();
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) {
        Matrix prod = s.basis()[i] * s.basis()[j];
        if (s.try_extend(prod, eps)) added = true;
      }
    if (!added) break;
  }
  return s;
}

/// Commutant of alg inside alg, computed as the null space of the stacked
/// commutator map c -> ([sum_i c_i b_i, b_j])_j.
inline OperatorSubspace center_of(const OperatorSubspace& alg, double eps = tol::closure) {
  if (!alg.is_star_algebra(std::max(eps, 1e-8)))
    throw ValidationError("center_of: input is not closed as an algebra");
  Index n = alg.ambient_dim();
  int m = alg.dim();
  Matrix k(static_cast<Index>(m) * n * n, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      Matrix comm = alg.basis()[i] * alg.basis()[j] - alg.basis()[j] * alg.basis()[i];
      k.block(static_cast<Index>(j) * n * n, i, n * n, 1) = vectorize(comm);
    }
  }
  auto null_vecs = kernel_basis(k, std::max(eps, tol::rank));
  std::vector<Matrix> gens;
  for (const auto& c : null_vecs) {
    Matrix x = Matrix::Zero(n, n);
    for (int i = 0; i < m; ++i) x += c(i) * alg.basis()[i];
    gens.push_back(x);
  }
  return OperatorSubspace::span_of(n, gens);
}

}  // namespace qms

#endif
