#ifndef QMS_SPINCHAIN_HPP
#define QMS_SPINCHAIN_HPP

#include <string>
#include <utility>
#include <vector>

#include "qms/channel.hpp"
#include "qms/matrix_ops.hpp"
#include "qms/semigroup.hpp"
#include "qms/state.hpp"
#include "qms/subspace.hpp"
#include "qms/types.hpp"

namespace qms {

/// Bond-space data of a translation-invariant chain state: d operators on a
/// k-dimensional bond space with sum_i l_i l_i^dag = I.
struct PopescuTensor {
  int d = 0;  // local spin dimension
  int k = 0;  // bond dimension
  std::vector<Matrix> ops;

  static PopescuTensor make(std::vector<Matrix> ops) {
    if (ops.size() < 2) throw ValidationError("PopescuTensor: need at least two operators");
    Index k = ops.front().rows();
    for (const auto& l : ops)
      if (l.rows() != k || l.cols() != k)
        throw DimensionError("PopescuTensor: operators must be square of equal bond dimension");
    return PopescuTensor{static_cast<int>(ops.size()), static_cast<int>(k), std::move(ops)};
  }
};

inline double row_isometry_defect(const PopescuTensor& t) {
  Matrix s = Matrix::Zero(t.k, t.k);
  for (const auto& l : t.ops) s += l * l.adjoint();
  return operator_norm(s - Matrix::Identity(t.k, t.k));
}

struct TensorValidation {
  double residual = 0.0;
  bool pass = false;
};

inline TensorValidation validate(const PopescuTensor& t, double eps = tol::unital) {
  double r = row_isometry_defect(t);
  return TensorValidation{r, r <= eps};
}

inline void require_valid(const PopescuTensor& t, double eps = tol::unital) {
  double r = row_isometry_defect(t);
  if (r > eps)
    throw ValidationError("PopescuTensor: row-isometry defect " + std::to_string(r));
}

/// Transfer map eta(x) = sum_i l_i x l_i^dag on the bond algebra.
inline CPMap eta_map(const PopescuTensor& t, double eps = tol::unital) {
  require_valid(t, eps);
  return CPMap::make(t.ops, eps);
}

using Word = std::vector<int>;

inline Matrix word_operator(const PopescuTensor& t, const Word& w) {
  Matrix m = Matrix::Identity(t.k, t.k);
  for (int letter : w) {
    if (letter < 0 || letter >= t.d) throw ValidationError("word letter out of range");
    m = m * t.ops[static_cast<std::size_t>(letter)];
  }
  return m;
}

/// C(I, J) = phi0(l_I l_J^dag); C(empty, empty) = 1.
inline Complex word_function(const PopescuTensor& t, const DensityState& state, const Word& i,
                             const Word& j) {
  if (state.dim() != t.k) throw DimensionError("word_function: state dim mismatch");
  return (state.rho * word_operator(t, i) * word_operator(t, j).adjoint()).trace();
}

inline std::vector<Word> words_of_length(int d, int len) {
  std::vector<Word> out{{}};
  for (int step = 0; step < len; ++step) {
    std::vector<Word> next;
    next.reserve(out.size() * static_cast<std::size_t>(d));
    for (const auto& w : out)
      for (int c = 0; c < d; ++c) {
        Word e = w;
        e.push_back(c);
        next.push_back(std::move(e));
      }
    out = std::move(next);
  }
  return out;
}

/// m-site marginal density: R[(j),(i)] = phi0(l_I l_J^dag) with the first
/// letter as the most significant index digit. Verified PSD, trace one, and
/// translation-consistent against the (m+1)-site marginal when that fits the
/// cap.
inline DensityState marginal_density(const PopescuTensor& t, const DensityState& state, int sites,
                                     long cap = 4096) {
  if (sites < 1) throw ValidationError("marginal_density: need at least one site");
  detail::require_invariant(eta_map(t), state);
  double dm = std::pow(double(t.d), sites);
  if (dm > static_cast<double>(cap))
    throw ValidationError("marginal_density: d^m exceeds the cap");
  Index dim = static_cast<Index>(dm + 0.5);

  auto build = [&](int m_sites) {
    auto words = words_of_length(t.d, m_sites);
    std::vector<Matrix> wops;
    wops.reserve(words.size());
    for (const auto& w : words) wops.push_back(word_operator(t, w));
    Index n = static_cast<Index>(words.size());
    Matrix r(n, n);
    for (Index jj = 0; jj < n; ++jj)
      for (Index ii = 0; ii < n; ++ii)
        r(jj, ii) = (state.rho * wops[static_cast<std::size_t>(ii)] *
                     wops[static_cast<std::size_t>(jj)].adjoint())
                        .trace();
    return r;
  };

  Matrix r = build(sites);
  Matrix sym = 0.5 * (r + r.adjoint().eval());
  if ((r - sym).norm() > 1e-10 * std::max(1.0, r.norm()))
    throw CheckError("marginal_density: matrix is not Hermitian; index convention broken");
  if (min_eigenvalue(sym) < -tol::psd * 10)
    throw CheckError("marginal_density: marginal has a negative eigenvalue");

  // translation consistency against the (m+1)-site marginal
  if (std::pow(double(t.d), sites + 1) <= static_cast<double>(cap)) {
    Matrix big = build(sites + 1);
    Index dd = t.d;
    Matrix last = Matrix::Zero(dim, dim);
    Matrix first = Matrix::Zero(dim, dim);
    for (Index a = 0; a < dim; ++a)
      for (Index b = 0; b < dim; ++b)
        for (Index c = 0; c < dd; ++c) {
          last(a, b) += big(a * dd + c, b * dd + c);
          first(a, b) += big(c * dim + a, c * dim + b);
        }
    if ((last - r).norm() > 1e-10 || (first - r).norm() > 1e-10)
      throw CheckError("marginal_density: partial-trace consistency failed");
  }
  return DensityState::make(sym, 1e-9, tol::psd * 100, 1e-8);
}

struct SupportReduction {
  PopescuTensor tensor;
  DensityState state;  // invariant and faithful for the returned tensor
  bool reduced = false;
  int fixed_dim = 0;  // predual fixed-space dimension before reduction
};

/// Compress the tensor to the maximal invariant support of the transfer map.
/// When compression is needed while the invariant state is not unique the
/// reduction is ambiguous and raises; a tensor whose maximal invariant state
/// is already faithful is returned unchanged.
inline SupportReduction support_reduce(const PopescuTensor& t, double eps = 1e-9) {
  require_valid(t);
  CPMap eta = eta_map(t);
  InvariantStates inv = invariant_states(eta, eps);
  if (inv.faithful_exists)
    return SupportReduction{t, inv.maximal, false, inv.fixed_dim};
  if (inv.fixed_dim > 1)
    throw ValidationError(
        "support_reduce: several invariant states with non-comparable supports; "
        "the reduction is ambiguous");
  Projection q = support_projection(inv.maximal);
  Matrix c = range_isometry(q);
  std::vector<Matrix> ops;
  ops.reserve(t.ops.size());
  for (const auto& l : t.ops) ops.push_back(c.adjoint() * l * c);
  PopescuTensor rt = PopescuTensor::make(std::move(ops));
  double defect = row_isometry_defect(rt);
  if (defect > 1e-9)
    throw CheckError("support_reduce: corner lost the row-isometry relation, defect " +
                     std::to_string(defect));
  DensityState rs = compress_state(inv.maximal, q);
  if (!rs.faithful) throw CheckError("support_reduce: reduced state is not faithful");
  return SupportReduction{rt, rs, true, inv.fixed_dim};
}

struct ExtremalityReport {
  bool factor = false;
  bool ergodic = false;
};

/// factor <=> the algebra generated by the tensor has trivial center;
/// ergodic <=> the transfer map has a one-dimensional fixed space.
inline ExtremalityReport extremality_check(const PopescuTensor& t, double eps = tol::closure) {
  require_valid(t);
  CPMap eta = eta_map(t);
  InvariantStates inv = invariant_states(eta);
  if (!inv.faithful_exists)
    throw ValidationError("extremality_check: tensor must be support-reduced first");
  OperatorSubspace alg = algebra_closure(t.ops, eps);
  bool factor = center_of(alg, eps).dim() == 1;
  bool ergodic = kernel_dim(superop_of(eta).mat -
                            Matrix::Identity(Index(t.k) * t.k, Index(t.k) * t.k)) == 1;
  return ExtremalityReport{factor, ergodic};
}

struct ChainReport {
  bool pure = false;
  bool extremal = false;
  bool factor = false;
  bool ergodic = false;
  std::vector<Complex> peripheral_eigenvalues;
  double gap = 0.0;
  bool support_reduced = false;
  int fixed_algebra_dim = 0;
};

/// Purity of the induced translation-invariant chain state: support-reduce,
/// then the state is pure iff the reduced transfer system is strongly mixing.
/// classify() already cross-checks the spectral verdict against direct
/// correlation factorization and raises on disagreement. A tensor whose
/// transfer map has several invariant states can never mix; it is reported
/// not pure with the fixed-space dimension as the witness.
inline ChainReport purity_check(const PopescuTensor& t, double eps = tol::peripheral) {
  require_valid(t);
  CPMap eta = eta_map(t);
  InvariantStates inv = invariant_states(eta);

  ChainReport r;
  if (!inv.faithful_exists && inv.fixed_dim > 1) {
    SpectralData sd = spectral_data(superop_of(eta).mat, eps);
    r.pure = false;
    r.factor = center_of(algebra_closure(t.ops), tol::closure).dim() == 1;
    r.ergodic = false;
    r.extremal = false;
    r.peripheral_eigenvalues = sd.peripheral;
    r.gap = sd.gap;
    r.support_reduced = false;
    r.fixed_algebra_dim = sd.fixed_dim;
    return r;
  }

  SupportReduction sr = support_reduce(t, 1e-9);
  Classification cls = classify(eta_map(sr.tensor), sr.state, eps);
  ExtremalityReport ex = extremality_check(sr.tensor);
  r.pure = cls.strong_mixing;
  r.factor = ex.factor;
  r.ergodic = ex.ergodic;
  r.extremal = ex.factor && ex.ergodic;
  r.peripheral_eigenvalues = cls.peripheral_eigenvalues;
  r.gap = cls.spectral_gap;
  r.support_reduced = sr.reduced;
  r.fixed_algebra_dim = cls.fixed_algebra_dim;
  if (r.pure && !r.extremal)
    throw CheckError("purity_check: pure verdict without factor+ergodic; inconsistent");
  return r;
}

/// Gauge action of a unitary g on the generators: l_i' = sum_j conj(g_ij) l_j.
/// The row-isometry relation is preserved and re-verified.
inline PopescuTensor gauge_transform(const PopescuTensor& t, const Matrix& g,
                                     double eps = 1e-8) {
  if (g.rows() != t.d || g.cols() != t.d)
    throw DimensionError("gauge_transform: g must be d x d");
  if ((g.adjoint() * g - Matrix::Identity(t.d, t.d)).norm() > eps)
    throw ValidationError("gauge_transform: g is not unitary within tolerance");
  std::vector<Matrix> ops(t.ops.size(), Matrix::Zero(t.k, t.k));
  for (int i = 0; i < t.d; ++i)
    for (int j = 0; j < t.d; ++j)
      ops[static_cast<std::size_t>(i)] +=
          std::conj(g(i, j)) * t.ops[static_cast<std::size_t>(j)];
  PopescuTensor out = PopescuTensor::make(std::move(ops));
  double defect = row_isometry_defect(out);
  if (defect > std::max(eps, 1e-10) + row_isometry_defect(t))
    throw CheckError("gauge_transform: row-isometry relation broken, defect " +
                     std::to_string(defect));
  return out;
}

}  // namespace qms

#endif
