#ifndef QMS_LINDBLAD_HPP
#define QMS_LINDBLAD_HPP

#include <utility>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "qms/channel.hpp"
#include "qms/matrix_ops.hpp"
#include "qms/semigroup.hpp"
#include "qms/state.hpp"
#include "qms/types.hpp"

namespace qms {

/// Generator of a continuous-time semigroup in the Heisenberg picture,
/// L(x) = i[H, x] + sum_k (L_k^dag x L_k - 1/2 {L_k^dag L_k, x}).
struct LindbladGenerator {
  Index dim = 0;
  Matrix hamiltonian;
  std::vector<Matrix> jumps;

  static LindbladGenerator make(const Matrix& h, std::vector<Matrix> jumps,
                                double eps = 1e-8) {
    Index n = h.rows();
    if (h.cols() != n || n == 0) throw DimensionError("LindbladGenerator: H must be square");
    if (!is_hermitian(h, eps)) throw ValidationError("LindbladGenerator: H must be Hermitian");
    for (const auto& l : jumps)
      if (l.rows() != n || l.cols() != n)
        throw DimensionError("LindbladGenerator: jump operator dimension mismatch");
    return LindbladGenerator{n, h, std::move(jumps)};
  }
};

inline Matrix apply_generator(const LindbladGenerator& gen, const Matrix& x) {
  if (x.rows() != gen.dim || x.cols() != gen.dim)
    throw DimensionError("apply_generator: dim mismatch");
  Complex i(0, 1);
  Matrix y = i * (gen.hamiltonian * x - x * gen.hamiltonian);
  for (const auto& l : gen.jumps) {
    Matrix ll = l.adjoint() * l;
    y += l.adjoint() * x * l - 0.5 * (ll * x + x * ll);
  }
  return y;
}

inline Superoperator generator_superop(const LindbladGenerator& gen) {
  Index n = gen.dim;
  Matrix id = Matrix::Identity(n, n);
  Complex i(0, 1);
  Matrix m = i * (kron(id, gen.hamiltonian) - kron(gen.hamiltonian.transpose(), id));
  for (const auto& l : gen.jumps) {
    Matrix ll = l.adjoint() * l;
    m += kron(l.transpose(), l.adjoint());
    m -= 0.5 * (kron(id, ll) + kron(ll.transpose(), id));
  }
  return Superoperator{n, std::move(m)};
}

/// exp(t L) as a superoperator; verified unital and completely positive.
inline Superoperator lindblad_exponential(const LindbladGenerator& gen, double t,
                                          double eps = 1e-8) {
  if (t < 0) throw ValidationError("lindblad_exponential: t must be nonnegative");
  Matrix m = (t * generator_superop(gen).mat).exp();
  if (!m.allFinite()) throw CheckError("lindblad_exponential: exponential did not converge");
  Superoperator s{gen.dim, std::move(m)};
  Matrix id = Matrix::Identity(gen.dim, gen.dim);
  if ((s.apply(id) - id).norm() > eps)
    throw CheckError("lindblad_exponential: result is not unital within tolerance");
  if (min_eigenvalue(choi_from_superop(s)) < -eps)
    throw CheckError("lindblad_exponential: Choi matrix is not PSD within tolerance");
  return s;
}

/// Kraus form of the sampled map exp(t L).
inline CPMap sampled_map(const LindbladGenerator& gen, double t, double eps = 1e-9) {
  return cpmap_from_superop(lindblad_exponential(gen, t), eps);
}

/// Stationary state of maximal support: ergodic projection of the maximally
/// mixed state onto the kernel of the predual generator. The kernel of pre is
/// the eigenvalue-1 space of pre + I, so the channel machinery applies as is.
inline DensityState stationary_state(const LindbladGenerator& gen) {
  Index n = gen.dim;
  Matrix pre = generator_superop(gen).mat.adjoint();
  Matrix shifted = pre + Matrix::Identity(n * n, n * n);
  Matrix p0 = detail::fixed_space_projector(shifted);
  Matrix rho = devectorize((p0 * vectorize(Matrix::Identity(n, n) / double(n))).eval(), n);
  rho = detail::clip_psd(0.5 * (rho + rho.adjoint().eval()));
  double tr = rho.trace().real();
  if (tr < 1e-12) throw CheckError("stationary_state: could not extract a state from the kernel");
  rho /= tr;
  double res = devectorize((pre * vectorize(rho)).eval(), n).norm();
  if (res > 1e-7)
    throw CheckError("stationary_state: extracted state is not stationary, residual " +
                     std::to_string(res));
  return DensityState::make(rho, 1e-8, tol::psd * 100, 1e-8);
}

/// Number of stationary states (dimension of the predual generator kernel).
inline int stationary_space_dim(const LindbladGenerator& gen) {
  return kernel_dim(generator_superop(gen).mat.adjoint());
}

}  // namespace qms

#endif
