#ifndef QMS_CHANNEL_HPP
#define QMS_CHANNEL_HPP

#include <utility>
#include <vector>

#include "qms/matrix_ops.hpp"
#include "qms/state.hpp"
#include "qms/types.hpp"

namespace qms {

/// Linear representation of a map on M_n, acting on column-stacked matrices.
struct Superoperator {
  Index dim = 0;
  Matrix mat;  // n^2 x n^2

  Matrix apply(const Matrix& x) const {
    if (x.rows() != dim || x.cols() != dim) throw DimensionError("Superoperator: dim mismatch");
    return devectorize(mat * vectorize(x), dim);
  }
};

/// Unital completely positive map in the Heisenberg picture,
/// tau(x) = sum_i l_i x l_i^dag with sum_i l_i l_i^dag = I.
/// The predual (state evolution) is rho -> sum_i l_i^dag rho l_i.
struct CPMap {
  Index dim = 0;
  std::vector<Matrix> kraus;

  Matrix unitality_defect() const {
    Matrix s = Matrix::Zero(dim, dim);
    for (const auto& l : kraus) s += l * l.adjoint();
    return s - Matrix::Identity(dim, dim);
  }

  Matrix apply(const Matrix& x) const {
    if (x.rows() != dim || x.cols() != dim) throw DimensionError("CPMap::apply: dim mismatch");
    Matrix y = Matrix::Zero(dim, dim);
    for (const auto& l : kraus) y += l * x * l.adjoint();
    return y;
  }

  Matrix predual_apply(const Matrix& rho) const {
    if (rho.rows() != dim || rho.cols() != dim)
      throw DimensionError("CPMap::predual_apply: dim mismatch");
    Matrix y = Matrix::Zero(dim, dim);
    for (const auto& l : kraus) y += l.adjoint() * rho * l;
    return y;
  }

  static CPMap make(std::vector<Matrix> kraus, double unital_eps = tol::unital) {
    if (kraus.empty()) throw ValidationError("CPMap: Kraus family must be nonempty");
    Index n = kraus.front().rows();
    for (const auto& l : kraus) {
      if (l.rows() != n || l.cols() != n)
        throw DimensionError("CPMap: Kraus operators must be square of equal dimension");
      if (!l.allFinite()) throw ValidationError("CPMap: Kraus entries must be finite");
    }
    CPMap m{n, std::move(kraus)};
    double defect = m.unitality_defect().norm();
    if (defect > unital_eps)
      throw ValidationError("CPMap: not unital, ||sum l l^dag - I|| = " + std::to_string(defect));
    return m;
  }
};

/// vec(tau(x)) = [ sum_i conj(l_i) (x) l_i ] vec(x) under column stacking.
inline Superoperator superop_of(const CPMap& map) {
  Index n2 = map.dim * map.dim;
  Matrix m = Matrix::Zero(n2, n2);
  for (const auto& l : map.kraus) m += kron(l.conjugate(), l);
  return Superoperator{map.dim, std::move(m)};
}

/// The predual superoperator is the plain HS adjoint of the Heisenberg one.
inline Superoperator predual_superop(const CPMap& map) {
  Superoperator s = superop_of(map);
  s.mat = s.mat.adjoint().eval();
  return s;
}

/// Choi matrix sum_i vec(l_i) vec(l_i)^dag; PSD iff the map is CP.
inline Matrix choi_of(const CPMap& map) {
  Index n2 = map.dim * map.dim;
  Matrix c = Matrix::Zero(n2, n2);
  for (const auto& l : map.kraus) {
    Vector v = vectorize(l);
    c += v * v.adjoint();
  }
  return c;
}

/// Index shuffle from the superoperator matrix to the Choi matrix:
/// C[(c n + r), (c' n + r')] = M[(r' n + r), (c' n + c)].
inline Matrix choi_from_superop(const Superoperator& s) {
  Index n = s.dim;
  Matrix c(n * n, n * n);
  for (Index cc = 0; cc < n; ++cc)
    for (Index r = 0; r < n; ++r)
      for (Index cp = 0; cp < n; ++cp)
        for (Index rp = 0; rp < n; ++rp)
          c(cc * n + r, cp * n + rp) = s.mat(rp * n + r, cp * n + cc);
  return c;
}

inline double choi_min_eigenvalue(const CPMap& map) { return min_eigenvalue(choi_of(map)); }

/// Kraus extraction from a superoperator via the Choi eigensystem.
/// Throws when the map is not CP or not unital within eps.
inline CPMap cpmap_from_superop(const Superoperator& s, double eps = 1e-9) {
  Matrix choi = choi_from_superop(s);
  auto es = detail::hermitian_eigs(choi);
  double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  if (es.eigenvalues().minCoeff() < -eps * scale)
    throw ValidationError("cpmap_from_superop: Choi matrix has a negative eigenvalue");
  std::vector<Matrix> kraus;
  for (Index i = 0; i < es.eigenvalues().size(); ++i) {
    double ev = es.eigenvalues()(i);
    if (ev > eps * scale) {
      Vector v = std::sqrt(ev) * es.eigenvectors().col(i);
      kraus.push_back(devectorize(v, s.dim));
    }
  }
  return CPMap::make(std::move(kraus), std::max(eps * 100, tol::unital));
}

/// Minimal-rank Kraus family for the same map (Choi eigenvectors above eps).
inline CPMap minimize_kraus(const CPMap& map, double eps = 1e-10) {
  auto es = detail::hermitian_eigs(choi_of(map));
  std::vector<Matrix> kraus;
  for (Index i = 0; i < es.eigenvalues().size(); ++i) {
    double ev = es.eigenvalues()(i);
    if (ev > eps) kraus.push_back(std::sqrt(ev) * devectorize(es.eigenvectors().col(i), map.dim));
  }
  return CPMap::make(std::move(kraus), tol::unital);
}

/// (a o b)(x) = a(b(x)), with Kraus family {a_i b_j}.
inline CPMap compose(const CPMap& a, const CPMap& b) {
  if (a.dim != b.dim) throw DimensionError("compose: dim mismatch");
  std::vector<Matrix> kraus;
  kraus.reserve(a.kraus.size() * b.kraus.size());
  for (const auto& ka : a.kraus)
    for (const auto& kb : b.kraus) kraus.push_back(ka * kb);
  return CPMap::make(std::move(kraus), tol::unital);
}

inline bool is_subharmonic(const CPMap& map, const Projection& p, double eps = 1e-8) {
  return min_eigenvalue(map.apply(p.p) - p.p) >= -eps;
}

/// Corner map x -> p tau(p x p) p expressed on rank(p) dimensions.
/// Sub-harmonicity of p makes the corner map unital.
inline CPMap reduced_semigroup(const CPMap& map, const Projection& p, double eps = 1e-8) {
  if (p.dim() != map.dim) throw DimensionError("reduced_semigroup: dim mismatch");
  if (!is_subharmonic(map, p, eps))
    throw ValidationError("reduced_semigroup: projection is not sub-harmonic");
  Matrix c = range_isometry(p);
  std::vector<Matrix> kraus;
  kraus.reserve(map.kraus.size());
  for (const auto& l : map.kraus) kraus.push_back(c.adjoint() * l * c);
  return CPMap::make(std::move(kraus), std::max(eps, tol::unital));
}

/// Compression of a state to the range of p, normalized.
inline DensityState compress_state(const DensityState& s, const Projection& p,
                                   double psd_eps = tol::psd) {
  Matrix c = range_isometry(p);
  Matrix r = c.adjoint() * s.rho * c;
  r = 0.5 * (r + r.adjoint().eval());
  double tr = r.trace().real();
  if (tr <= 0) throw ValidationError("compress_state: compressed trace is not positive");
  return DensityState::make(r / tr, 1e-8, psd_eps * 10, 1e-8);
}

}  // namespace qms

#endif
