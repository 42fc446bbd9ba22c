#ifndef QMS_STATE_HPP
#define QMS_STATE_HPP

#include <cmath>

#include "qms/matrix_ops.hpp"
#include "qms/types.hpp"

namespace qms {

/// Positive trace-one matrix representing a normal state. Immutable after make().
struct DensityState {
  Matrix rho;
  bool faithful = false;

  Index dim() const { return rho.rows(); }

  static DensityState make(const Matrix& rho, double herm_eps = tol::herm,
                           double psd_eps = tol::psd, double trace_eps = tol::trace,
                           double faithful_eps = tol::faithful) {
    if (rho.rows() != rho.cols() || rho.rows() == 0)
      throw DimensionError("DensityState: matrix must be square and nonempty");
    if (!rho.allFinite()) throw ValidationError("DensityState: entries must be finite");
    if ((rho - rho.adjoint()).norm() > herm_eps * std::max(1.0, rho.norm()))
      throw ValidationError("DensityState: not Hermitian within tolerance");
    double mn = min_eigenvalue(rho);
    if (mn < -psd_eps) throw ValidationError("DensityState: negative eigenvalue beyond tolerance");
    if (std::abs(rho.trace().real() - 1.0) > trace_eps || std::abs(rho.trace().imag()) > trace_eps)
      throw ValidationError("DensityState: trace is not one within tolerance");
    DensityState s;
    s.rho = rho;
    s.faithful = mn > faithful_eps;
    return s;
  }
};

struct Projection {
  Matrix p;

  Index dim() const { return p.rows(); }
  Index rank() const { return static_cast<Index>(std::lround(p.trace().real())); }

  static Projection make(const Matrix& p, double eps = 1e-8) {
    if (p.rows() != p.cols()) throw DimensionError("Projection: matrix must be square");
    if ((p - p.adjoint()).norm() > eps * std::max(1.0, p.norm()))
      throw ValidationError("Projection: not Hermitian within tolerance");
    if ((p * p - p).norm() > eps * std::max(1.0, p.norm()))
      throw ValidationError("Projection: not idempotent within tolerance");
    return Projection{p};
  }
};

/// Spectral projection of rho onto eigenvalues above eps. Minimal projection
/// with trace(rho p) = 1 up to n * eps.
inline Projection support_projection(const DensityState& state, double eps = tol::psd) {
  auto es = detail::hermitian_eigs(state.rho);
  Index n = state.dim();
  Matrix p = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    if (es.eigenvalues()(i) > eps) {
      Vector v = es.eigenvectors().col(i);
      p += v * v.adjoint();
    }
  }
  return Projection{p};
}

/// n x r isometry whose columns span range(p).
inline Matrix range_isometry(const Projection& p) {
  auto es = detail::hermitian_eigs(p.p);
  Index n = p.dim();
  Index r = 0;
  for (Index i = 0; i < n; ++i)
    if (es.eigenvalues()(i) > 0.5) ++r;
  Matrix c(n, r);
  Index k = 0;
  for (Index i = 0; i < n; ++i)
    if (es.eigenvalues()(i) > 0.5) c.col(k++) = es.eigenvectors().col(i);
  return c;
}

}  // namespace qms

#endif
