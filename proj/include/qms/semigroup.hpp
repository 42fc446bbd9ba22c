#ifndef QMS_SEMIGROUP_HPP
#define QMS_SEMIGROUP_HPP

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "qms/channel.hpp"
#include "qms/matrix_ops.hpp"
#include "qms/state.hpp"
#include "qms/subspace.hpp"
#include "qms/types.hpp"

namespace qms {

// ---------------------------------------------------------------------------
// Spectral bookkeeping shared by classification and the peripheral algebras.

struct SpectralData {
  std::vector<Complex> eigenvalues;  // sorted by modulus desc, then argument
  std::vector<Complex> peripheral;   // |lambda| >= 1 - peripheral_eps
  std::vector<Vector> peripheral_vectors;
  double lambda2 = 0.0;  // largest non-peripheral modulus
  double gap = 1.0;      // 1 - lambda2
  int fixed_dim = 0;     // geometric dim of ker(M - I)
};

inline SpectralData spectral_data(const Matrix& superop_mat,
                                  double peripheral_eps = tol::peripheral,
                                  double rank_eps = tol::rank) {
  Eigen::ComplexEigenSolver<Matrix> es(superop_mat);
  if (es.info() != Eigen::Success) throw CheckError("superoperator eigensolver failed");
  SpectralData sd;
  std::vector<Index> order(static_cast<std::size_t>(superop_mat.rows()));
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<Index>(i);
  std::sort(order.begin(), order.end(), [&](Index a, Index b) {
    double ma = std::abs(es.eigenvalues()(a)), mb = std::abs(es.eigenvalues()(b));
    if (std::abs(ma - mb) > 1e-14) return ma > mb;
    return std::arg(es.eigenvalues()(a)) < std::arg(es.eigenvalues()(b));
  });
  for (Index i : order) {
    Complex ev = es.eigenvalues()(i);
    sd.eigenvalues.push_back(ev);
    if (std::abs(ev) >= 1.0 - peripheral_eps) {
      sd.peripheral.push_back(ev);
      sd.peripheral_vectors.push_back(es.eigenvectors().col(i));
    } else {
      sd.lambda2 = std::max(sd.lambda2, std::abs(ev));
    }
  }
  sd.gap = 1.0 - sd.lambda2;
  sd.fixed_dim = kernel_dim(superop_mat - Matrix::Identity(superop_mat.rows(), superop_mat.cols()),
                            rank_eps);
  return sd;
}

// ---------------------------------------------------------------------------
// Invariant states.

struct InvariantStates {
  std::vector<DensityState> states;  // trace-one invariant states spanning the fixed cone
  DensityState maximal;              // invariant state of maximal support
  bool faithful_exists = false;
  int fixed_dim = 0;  // dim of the predual fixed space
};

namespace detail {

inline Matrix clip_psd(const Matrix& h, double clip_floor = 0.0) {
  auto es = hermitian_eigs(h);
  RealVector vals = es.eigenvalues().cwiseMax(clip_floor);
  return es.eigenvectors() * vals.asDiagonal() * es.eigenvectors().adjoint();
}

/// Spectral projection onto ker(N - I) along the complementary invariant
/// subspace; valid because peripheral eigenvalues of power-bounded maps are
/// semisimple. W spans ker(N^dag - I).
inline Matrix fixed_space_projector(const Matrix& n_mat, double rank_eps = tol::rank) {
  auto right = kernel_basis(n_mat - Matrix::Identity(n_mat.rows(), n_mat.cols()), rank_eps);
  auto left = kernel_basis(n_mat.adjoint() - Matrix::Identity(n_mat.rows(), n_mat.cols()),
                           rank_eps);
  if (right.empty() || right.size() != left.size())
    throw CheckError("fixed_space_projector: left/right fixed spaces mismatch");
  Index d = n_mat.rows();
  Matrix v(d, static_cast<Index>(right.size())), w(d, static_cast<Index>(left.size()));
  for (std::size_t i = 0; i < right.size(); ++i) v.col(static_cast<Index>(i)) = right[i];
  for (std::size_t i = 0; i < left.size(); ++i) w.col(static_cast<Index>(i)) = left[i];
  Matrix gram = w.adjoint() * v;
  Eigen::FullPivLU<Matrix> lu(gram);
  if (!lu.isInvertible())
    throw CheckError("fixed_space_projector: eigenvalue 1 appears defective");
  return v * lu.solve(w.adjoint());
}

}  // namespace detail

/// Basis of the eigenvalue-1 predual eigenspace, post-processed into density
/// states. The maximal-support invariant state is the ergodic projection of
/// the maximally mixed state; every other invariant support sits below it.
inline InvariantStates invariant_states(const CPMap& map, double eps = 1e-9) {
  Index n = map.dim;
  Matrix nm = predual_superop(map).mat;
  Matrix p1 = detail::fixed_space_projector(nm);

  InvariantStates out;
  out.fixed_dim = kernel_dim(nm - Matrix::Identity(n * n, n * n));

  Matrix rho_bar = devectorize(p1 * vectorize(Matrix::Identity(n, n) / double(n)), n);
  rho_bar = 0.5 * (rho_bar + rho_bar.adjoint().eval());
  rho_bar = detail::clip_psd(rho_bar);
  rho_bar /= rho_bar.trace().real();
  out.maximal = DensityState::make(rho_bar, 1e-8, tol::psd * 100, 1e-8);
  out.faithful_exists = out.maximal.faithful;

  out.states.push_back(out.maximal);
  auto fixed = kernel_basis(nm - Matrix::Identity(n * n, n * n));
  // smallest positive eigenvalue of rho_bar, used to buy positivity below
  double lam_plus = 1.0;
  {
    auto ev = detail::hermitian_eigs(rho_bar).eigenvalues();
    for (Index i = 0; i < ev.size(); ++i)
      if (ev(i) > 1e-12) lam_plus = std::min(lam_plus, ev(i));
  }
  for (const auto& v : fixed) {
    Matrix x = devectorize(v, n);
    for (Matrix h : {Matrix(0.5 * (x + x.adjoint())),
                     Matrix(Complex(0, 0.5) * (x.adjoint() - x))}) {
      if (h.norm() < 1e-12) continue;
      double shift = operator_norm(h) / lam_plus;
      Matrix sigma = h + shift * rho_bar;
      sigma = detail::clip_psd(0.5 * (sigma + sigma.adjoint().eval()));
      double tr = sigma.trace().real();
      if (tr < 1e-10) continue;
      sigma /= tr;
      if ((devectorize(nm * vectorize(sigma), n) - sigma).norm() > std::max(eps, 1e-7)) continue;
      bool dup = false;
      for (const auto& s : out.states)
        if ((s.rho - sigma).norm() < 1e-9) dup = true;
      if (!dup) out.states.push_back(DensityState::make(sigma, 1e-8, tol::psd * 100, 1e-8));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// KMS-adjoint semigroup.

namespace detail {

inline void require_invariant(const CPMap& map, const DensityState& state,
                              double eps = tol::invariant) {
  double r = (map.predual_apply(state.rho) - state.rho).norm();
  if (r > eps)
    throw ValidationError("state is not invariant for the map, residual " + std::to_string(r));
}

}  // namespace detail

/// Max residual of the adjoint relation
///   phi0(sigma_{1/2}(x) tau(y)) = phi0(dual(x) sigma_{-1/2}(y))
/// over a full matrix-unit grid, with sigma_{1/2}(x) = rho^{-1/2} x rho^{1/2}
/// and sigma_{-1/2}(y) = rho^{1/2} y rho^{-1/2}.
inline double kms_adjoint_residual(const CPMap& map, const CPMap& dual,
                                   const DensityState& state) {
  Index n = map.dim;
  Matrix r = hermitian_sqrt(state.rho);
  Matrix rinv = hermitian_inv_sqrt(state.rho);
  auto units = matrix_unit_basis(n);
  std::vector<Matrix> tau_y, dual_x, sig_x, sigm_y;
  for (const auto& e : units) {
    tau_y.push_back(map.apply(e));
    dual_x.push_back(dual.apply(e));
    sig_x.push_back(rinv * e * r);
    sigm_y.push_back(r * e * rinv);
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < units.size(); ++i)
    for (std::size_t j = 0; j < units.size(); ++j) {
      Complex lhs = (state.rho * sig_x[i] * tau_y[j]).trace();
      Complex rhs = (state.rho * dual_x[i] * sigm_y[j]).trace();
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  return worst;
}

/// KMS-dual map with Kraus family m_i = rho^{-1/2} l_i^dag rho^{1/2}.
/// Unitality of the dual follows from invariance of rho; the adjoint relation
/// is re-verified on a full grid before returning.
inline CPMap kms_dual(const CPMap& map, const DensityState& state, double eps = 1e-8) {
  if (state.dim() != map.dim) throw DimensionError("kms_dual: dim mismatch");
  if (!state.faithful)
    throw ValidationError("kms_dual: state is not faithful; reduce to its support first");
  detail::require_invariant(map, state, std::max(eps, tol::invariant));
  Matrix r = hermitian_sqrt(state.rho);
  Matrix rinv = hermitian_inv_sqrt(state.rho);
  std::vector<Matrix> kraus;
  kraus.reserve(map.kraus.size());
  for (const auto& l : map.kraus) kraus.push_back(rinv * l.adjoint() * r);
  CPMap dual = CPMap::make(std::move(kraus), std::max(eps, tol::unital));
  double res = kms_adjoint_residual(map, dual, state);
  if (res > std::max(eps, 1e-9))
    throw CheckError("kms_dual: adjoint relation residual " + std::to_string(res));
  return dual;
}

// ---------------------------------------------------------------------------
// Multiplicative domain and the peripheral algebras G, G0.

/// Two-sided multiplicative domain of a single map: the kernel of the PSD form
/// tr D(x,x) + tr D'(x,x), D(x,y) = tau(x^dag y) - tau(x^dag) tau(y).
inline OperatorSubspace multiplicative_domain(const CPMap& map, double eps = tol::closure) {
  Index n = map.dim;
  Matrix s = Matrix::Zero(n, n);
  for (const auto& l : map.kraus) s += l.adjoint() * l;
  Matrix m = superop_of(map).mat;
  Matrix a = kron(s.transpose(), Matrix::Identity(n, n)) +
             kron(Matrix::Identity(n, n), s) - 2.0 * m.adjoint() * m;
  auto es = detail::hermitian_eigs(a);
  double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  std::vector<Matrix> gens;
  for (Index i = 0; i < es.eigenvalues().size(); ++i)
    if (std::abs(es.eigenvalues()(i)) <= std::max(eps, 1e-9) * scale)
      gens.push_back(devectorize(es.eigenvectors().col(i), n));
  OperatorSubspace dom = OperatorSubspace::span_of(n, gens);
  if (!dom.is_star_algebra(std::max(eps, 1e-7)))
    throw CheckError("multiplicative_domain: kernel is not a *-algebra numerically");
  return dom;
}

/// G = span of peripheral eigenvectors of the superoperator. With a faithful
/// invariant state this coincides with {x : dual(tau(x)) = x}; the identity,
/// the *-algebra property and commutation with the modular generator are all
/// verified and a failure raises instead of guessing.
inline OperatorSubspace algebra_G(const CPMap& map, const DensityState& state,
                                  double eps = tol::peripheral) {
  if (!state.faithful) throw ValidationError("algebra_G: state must be faithful");
  detail::require_invariant(map, state);
  Index n = map.dim;
  SpectralData sd = spectral_data(superop_of(map).mat, eps);
  std::vector<Matrix> gens;
  for (const auto& v : sd.peripheral_vectors) gens.push_back(devectorize(v, n));
  OperatorSubspace g = OperatorSubspace::span_of(n, gens);

  std::string why;
  if (!g.contains(Matrix::Identity(n, n), 1e-7)) why = "identity not in span";
  if (why.empty() && !g.is_star_algebra(1e-7)) why = "not a *-algebra";
  if (why.empty()) {
    CPMap dual = kms_dual(map, state);
    Matrix logr = hermitian_log(state.rho);
    for (const auto& b : g.basis()) {
      Matrix tb = map.apply(b);
      if ((dual.apply(tb) - b).norm() > 1e-8 * std::max(1.0, b.norm())) {
        why = "dual . tau is not the identity on the span";
        break;
      }
      Matrix lhs = map.apply((logr * b - b * logr).eval());
      Matrix rhs = logr * tb - tb * logr;
      if ((lhs - rhs).norm() > 1e-7 * std::max(1.0, logr.norm())) {
        why = "does not commute with the modular generator";
        break;
      }
    }
  }
  if (!why.empty())
    throw CheckError("algebra_G: peripheral-eigenspace identification failed: " + why);
  return g;
}

/// G0 = intersection of the forward images of G; the maximal subalgebra on
/// which the map acts as a *-automorphism with the dual as its inverse.
inline OperatorSubspace algebra_G0(const CPMap& map, const DensityState& state,
                                   double eps = tol::peripheral) {
  OperatorSubspace g = algebra_G(map, state, eps);
  Index n = map.dim;
  OperatorSubspace cur = g;
  int stable = 0;
  for (Index it = 0; it < n * n + 2 && stable < static_cast<int>(n) * static_cast<int>(n); ++it) {
    std::vector<Matrix> imgs;
    imgs.reserve(cur.basis().size());
    for (const auto& b : cur.basis()) imgs.push_back(map.apply(b));
    OperatorSubspace next = OperatorSubspace::span_of(n, imgs);
    if (next.dim() == cur.dim()) ++stable; else stable = 0;
    cur = std::move(next);
  }
  // tau restricted to G0 must be an automorphism inverted by the dual
  CPMap dual = kms_dual(map, state);
  for (const auto& b : cur.basis()) {
    if (!cur.contains(map.apply(b), 1e-7))
      throw CheckError("algebra_G0: image iteration did not stabilize on an invariant algebra");
    if ((dual.apply(map.apply(b)) - b).norm() > 1e-7 ||
        (map.apply(dual.apply(b)) - b).norm() > 1e-7)
      throw CheckError("algebra_G0: map is not invertible on the intersection algebra");
  }
  return cur;
}

/// GNS-orthogonal projection onto a modular-invariant *-subalgebra, as a
/// superoperator. The GNS inner product is <a,b> = tr(rho a^dag b), i.e. the
/// metric (rho^T kron I) on column-stacked matrices.
inline Superoperator conditional_expectation(const OperatorSubspace& alg,
                                             const DensityState& state, double eps = 1e-8) {
  Index n = alg.ambient_dim();
  if (state.dim() != n) throw DimensionError("conditional_expectation: dim mismatch");
  if (!state.faithful)
    throw ValidationError("conditional_expectation: state must be faithful");
  if (!alg.is_star_algebra(std::max(eps, 1e-7)))
    throw ValidationError("conditional_expectation: input is not a *-algebra");

  // modular invariance: ad(log rho) maps the span into itself
  Matrix logr = hermitian_log(state.rho);
  for (const auto& b : alg.basis()) {
    Matrix ad = logr * b - b * logr;
    if (alg.residual(ad) > std::max(eps, 1e-7) * std::max(1.0, ad.norm() + 1.0))
      throw ValidationError(
          "conditional_expectation: algebra is not invariant under the modular group; "
          "the projection would not be a conditional expectation");
  }

  Matrix w = kron(state.rho.transpose(), Matrix::Identity(n, n));
  Matrix b(n * n, alg.dim());
  for (int i = 0; i < alg.dim(); ++i) b.col(i) = vectorize(alg.basis()[static_cast<std::size_t>(i)]);
  Matrix gram = b.adjoint() * w * b;
  Matrix e = b * gram.ldlt().solve(b.adjoint() * w);

  Superoperator es{n, e};
  if ((es.apply(Matrix::Identity(n, n)) - Matrix::Identity(n, n)).norm() > 1e-8)
    throw CheckError("conditional_expectation: projection is not unital");
  if ((e * e - e).norm() > 1e-8 * std::max(1.0, e.norm()))
    throw CheckError("conditional_expectation: projection is not idempotent");
  for (const auto& u : matrix_unit_basis(n)) {
    Complex d = (state.rho * es.apply(u)).trace() - (state.rho * u).trace();
    if (std::abs(d) > 1e-8)
      throw CheckError("conditional_expectation: projection does not preserve the state");
  }
  // positivity spot check on a fixed deterministic sample
  for (int k = 1; k <= 3; ++k) {
    Matrix g(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        g(i, j) = Complex(std::cos(0.7 * k + 1.3 * double(i) + 0.41 * double(j)),
                          std::sin(1.1 * k + 0.59 * double(i) - 0.83 * double(j)));
    Matrix y = g * g.adjoint();
    if (min_eigenvalue(es.apply(y)) < -1e-8 * std::max(1.0, y.norm()))
      throw CheckError("conditional_expectation: projection failed a positivity check");
  }
  return es;
}

// ---------------------------------------------------------------------------
// Correlations and trajectory distances.

inline Complex correlation(const CPMap& map, const DensityState& state, const Matrix& x,
                           const Matrix& y, int n) {
  detail::require_invariant(map, state);
  Matrix m = superop_of(map).mat;
  Matrix mp = matrix_power(m, static_cast<std::uint64_t>(n));
  Matrix xn = devectorize((mp * vectorize(x)).eval(), map.dim);
  Matrix yn = devectorize((mp * vectorize(y)).eval(), map.dim);
  return (state.rho * xn * yn).trace();
}

/// c_n = max over HS-basis pairs of |phi0(tau^n(x) tau^n(y)) - phi0(x) phi0(y)|.
/// Computed on centered observables (the cross terms vanish identically by
/// invariance), which keeps the decaying tail free of cancellation noise.
inline std::vector<double> correlation_profile(const CPMap& map, const DensityState& state,
                                               int n_max) {
  detail::require_invariant(map, state);
  Index n = map.dim;
  Matrix m = superop_of(map).mat;
  auto units = matrix_unit_basis(n);
  std::vector<Vector> cur;
  for (const auto& e : units) {
    Matrix centered = e - ((state.rho * e).trace()) * Matrix::Identity(n, n);
    cur.push_back(vectorize(centered));
  }
  std::vector<double> profile;
  profile.reserve(static_cast<std::size_t>(n_max) + 1);
  for (int step = 0; step <= n_max; ++step) {
    double worst = 0.0;
    std::vector<Matrix> mats;
    mats.reserve(cur.size());
    for (const auto& v : cur) mats.push_back(devectorize(v, n));
    for (const auto& a : mats)
      for (const auto& b : mats) worst = std::max(worst, std::abs((state.rho * a * b).trace()));
    profile.push_back(worst);
    if (step < n_max)
      for (auto& v : cur) v = m * v;
  }
  return profile;
}

/// Trace-norm distance of predual iterates, ||(tau^dag)^n(phi) - phi0||_1.
inline double predual_distance(const CPMap& map, const DensityState& phi,
                               const DensityState& phi0, int n) {
  if (phi.dim() != map.dim || phi0.dim() != map.dim)
    throw DimensionError("predual_distance: dim mismatch");
  Matrix nm = predual_superop(map).mat;
  Matrix it = devectorize((matrix_power(nm, static_cast<std::uint64_t>(n)) *
                           vectorize(phi.rho)).eval(), map.dim);
  Matrix diff = it - phi0.rho;
  auto ev = detail::hermitian_eigs(diff).eigenvalues();
  return ev.cwiseAbs().sum();
}

/// y = lim tau^n(p) for sub-harmonic p (monotone, so the limit exists),
/// plus the predicate ||y - I|| <= eps.
inline std::pair<Matrix, bool> subharmonic_limit(const CPMap& map, const Projection& p,
                                                 int n_max = 10000, double eps = 1e-10) {
  if (p.dim() != map.dim) throw DimensionError("subharmonic_limit: dim mismatch");
  if (!is_subharmonic(map, p, std::max(eps * 100, 1e-8)))
    throw ValidationError("subharmonic_limit: projection is not sub-harmonic");
  Matrix y = p.p;
  for (int it = 0; it < n_max; ++it) {
    Matrix next = map.apply(y);
    if (min_eigenvalue(next - y) < -std::max(eps * 100, 1e-8))
      throw CheckError("subharmonic_limit: iteration lost monotonicity");
    double step = (next - y).norm();
    y = next;
    if (step <= eps / 10.0) break;
  }
  bool reaches_identity = (y - Matrix::Identity(map.dim, map.dim)).norm() <= std::max(eps, 1e-8);
  return {y, reaches_identity};
}

// ---------------------------------------------------------------------------
// Classification: ergodic / strong mixing / Kolmogorov.

struct Classification {
  bool ergodic = false;
  bool strong_mixing = false;
  bool kolmogorov = false;
  std::vector<Complex> peripheral_eigenvalues;
  double spectral_gap = 0.0;
  int fixed_algebra_dim = 0;
  int G_dim = 0;
  bool support_reduced = false;
  std::shared_ptr<const Classification> reduced;  // set when support_reduced
};

namespace detail {

/// Numerical correlation-factorization verdict at a horizon chosen from the
/// non-peripheral spectral radius (powers by squaring keep this cheap).
inline bool correlation_factorizes(const Matrix& superop_mat, const DensityState& state,
                                   double lambda2, bool expect_decay) {
  Index n = state.dim();
  std::uint64_t horizon = 1024;
  if (expect_decay) {
    if (lambda2 <= 1e-12) {
      horizon = 2;
    } else {
      double need = std::log(1e-10) / (2.0 * std::log(lambda2));
      horizon = 2;
      while (static_cast<double>(horizon) < need && horizon < (1ull << 40)) horizon <<= 1;
    }
  }
  Matrix mp = matrix_power(superop_mat, horizon);
  auto units = matrix_unit_basis(n);
  double worst = 0.0;
  std::vector<Matrix> evolved;
  for (const auto& e : units) {
    Matrix centered = e - ((state.rho * e).trace()) * Matrix::Identity(n, n);
    evolved.push_back(devectorize((mp * vectorize(centered)).eval(), n));
  }
  for (const auto& a : evolved)
    for (const auto& b : evolved) worst = std::max(worst, std::abs((state.rho * a * b).trace()));
  return worst <= 1e-6;
}

inline Classification classify_spectral(const Matrix& superop_mat, const DensityState& state,
                                        double eps, bool require_agreement) {
  SpectralData sd = spectral_data(superop_mat, eps);
  Classification c;
  c.peripheral_eigenvalues = sd.peripheral;
  c.spectral_gap = sd.gap;
  c.fixed_algebra_dim = sd.fixed_dim;
  c.G_dim = static_cast<int>(sd.peripheral.size());
  c.ergodic = sd.fixed_dim == 1;
  c.strong_mixing = c.ergodic && sd.peripheral.size() == 1;
  bool numeric = correlation_factorizes(superop_mat, state, sd.lambda2, c.strong_mixing);
  if (require_agreement && numeric != c.strong_mixing)
    throw CheckError(
        "classify: spectral mixing verdict disagrees with the correlation-decay check");
  c.kolmogorov = require_agreement ? c.strong_mixing : numeric;
  return c;
}

}  // namespace detail

/// Classification of a superoperator with a given invariant state. With a
/// faithful state the Kolmogorov flag is the mixing flag, cross-checked
/// against direct correlation decay; a disagreement raises.
inline Classification classify_superop(const Superoperator& s, const DensityState& state,
                                       double eps = tol::peripheral) {
  if (state.dim() != s.dim) throw DimensionError("classify_superop: dim mismatch");
  Matrix pre = s.mat.adjoint();
  double inv = (devectorize((pre * vectorize(state.rho)).eval(), s.dim) - state.rho).norm();
  if (inv > tol::invariant)
    throw ValidationError("classify_superop: state is not invariant, residual " +
                          std::to_string(inv));
  return detail::classify_spectral(s.mat, state, eps, state.faithful);
}

/// Classification of a channel. A non-faithful invariant state re-routes
/// through the support reduction; the reduced verdict is attached and checked
/// for consistency with the ambient spectral one.
inline Classification classify(const CPMap& map, const DensityState& state,
                               double eps = tol::peripheral) {
  detail::require_invariant(map, state);
  if (state.faithful) return classify_superop(superop_of(map), state, eps);

  Projection p = support_projection(state);
  CPMap red = reduced_semigroup(map, p);
  DensityState red_state = compress_state(state, p);
  Classification inner = classify_superop(superop_of(red), red_state, eps);

  Classification amb = detail::classify_spectral(superop_of(map).mat, state, eps, false);
  auto [limit, reaches] = subharmonic_limit(map, p);
  (void)limit;
  bool expect_ergodic = reaches && inner.ergodic;
  bool expect_mixing = reaches && inner.strong_mixing;
  if (amb.ergodic != expect_ergodic || amb.strong_mixing != expect_mixing)
    throw CheckError("classify: ambient spectral verdict disagrees with the support reduction");
  amb.support_reduced = true;
  amb.reduced = std::make_shared<Classification>(inner);
  return amb;
}

/// (ergodic, mixing) of the map restricted to an invariant subspace containing
/// the identity, via the matrix of the action in an HS-orthonormal basis.
inline std::pair<bool, bool> restricted_classification(const CPMap& map,
                                                       const OperatorSubspace& sub,
                                                       double eps = tol::peripheral) {
  int m = sub.dim();
  if (m == 0) throw ValidationError("restricted_classification: empty subspace");
  Matrix r(m, m);
  for (int j = 0; j < m; ++j) {
    Matrix img = map.apply(sub.basis()[static_cast<std::size_t>(j)]);
    if (sub.residual(img) > 1e-7 * std::max(1.0, img.norm()))
      throw ValidationError("restricted_classification: subspace is not invariant");
    for (int i = 0; i < m; ++i) r(i, j) = hs_inner(sub.basis()[static_cast<std::size_t>(i)], img);
  }
  int fixed = kernel_dim(r - Matrix::Identity(m, m));
  Eigen::ComplexEigenSolver<Matrix> es(r);
  int peripheral = 0;
  for (Index i = 0; i < es.eigenvalues().size(); ++i)
    if (std::abs(es.eigenvalues()(i)) >= 1.0 - eps) ++peripheral;
  bool ergodic = fixed == 1;
  bool mixing = ergodic && peripheral == 1;
  return {ergodic, mixing};
}

}  // namespace qms

#endif
