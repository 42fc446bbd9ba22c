#ifndef QMS_RANDOM_GEN_HPP
#define QMS_RANDOM_GEN_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "qms/channel.hpp"
#include "qms/lindblad.hpp"
#include "qms/semigroup.hpp"
#include "qms/spinchain.hpp"
#include "qms/state.hpp"
#include "qms/types.hpp"

namespace qms {

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Per-instance seed for sweeps: instance i of a run seeded with s draws from
/// splitmix64(splitmix64(s) + i). Report assembly preserves index order, so
/// results are independent of any scheduling.
inline std::uint64_t instance_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) + index);
}

/// Self-contained generator (xorshift-free, splitmix stream + Box-Muller) so
/// sweeps are reproducible independent of the standard library's
/// distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(splitmix64(seed ^ 0x6A09E667F3BCC908ull)) {}

  std::uint64_t next() {
    state_ = splitmix64(state_);
    return state_;
  }

  double uniform() {  // in [0, 1)
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  double gaussian() {
    double u1 = uniform(), u2 = uniform();
    while (u1 <= 1e-300) u1 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  Complex cgauss() { return Complex(gaussian(), gaussian()) / std::sqrt(2.0); }

 private:
  std::uint64_t state_;
};

inline Matrix random_gaussian(Index rows, Index cols, Rng& rng) {
  Matrix m(rows, cols);
  for (Index c = 0; c < cols; ++c)
    for (Index r = 0; r < rows; ++r) m(r, c) = rng.cgauss();
  return m;
}

inline Matrix random_unitary(Index n, Rng& rng) {
  Matrix g = random_gaussian(n, n, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index i = 0; i < n; ++i) {
    Complex d = r(i, i);
    q.col(i) *= (std::abs(d) > 1e-300) ? d / std::abs(d) : Complex(1, 0);
  }
  return q;
}

inline Matrix random_isometry(Index rows, Index cols, Rng& rng) {
  Matrix g = random_gaussian(rows, cols, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = Matrix(qr.householderQ()).leftCols(cols);
  return q;
}

inline DensityState random_density(Index n, Rng& rng, double mix_floor = 0.05) {
  Matrix g = random_gaussian(n, n, rng);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  // a floor of the maximally mixed state keeps the state well-conditioned
  rho = (1.0 - mix_floor) * rho + mix_floor * Matrix::Identity(n, n) / double(n);
  return DensityState::make(rho);
}

/// Random unital channel in the Heisenberg convention: the blocks of a random
/// isometry give a trace-preserving Schroedinger family, whose adjoints are
/// Heisenberg-unital.
inline CPMap random_unital_channel(Index n, int kraus_count, Rng& rng) {
  Matrix w = random_isometry(n * kraus_count, n, rng);
  std::vector<Matrix> kraus;
  kraus.reserve(static_cast<std::size_t>(kraus_count));
  for (int i = 0; i < kraus_count; ++i)
    kraus.push_back(w.block(Index(i) * n, 0, n, n).adjoint());
  return CPMap::make(std::move(kraus));
}

struct ChannelWithState {
  CPMap map;
  DensityState state;
};

/// Draws channels until the maximal invariant state is faithful (and, when
/// max_lambda2 < 1, until the non-peripheral spectral radius is below it so
/// fixed-horizon convergence tests are conclusive). Deterministic in seed.
inline ChannelWithState random_channel_with_faithful_state(Index n, int kraus_count,
                                                           std::uint64_t seed,
                                                           double min_eig = 1e-3,
                                                           double max_lambda2 = 1.0) {
  for (std::uint64_t attempt = 0; attempt < 256; ++attempt) {
    Rng rng(instance_seed(seed, attempt));
    CPMap map = random_unital_channel(n, kraus_count, rng);
    InvariantStates inv = invariant_states(map);
    if (!inv.faithful_exists) continue;
    if (min_eigenvalue(inv.maximal.rho) < min_eig) continue;
    if (max_lambda2 < 1.0) {
      SpectralData sd = spectral_data(superop_of(map).mat);
      if (sd.lambda2 > max_lambda2) continue;
    }
    return ChannelWithState{map, inv.maximal};
  }
  throw CheckError("random_channel_with_faithful_state: no admissible instance in 256 draws");
}

inline LindbladGenerator random_lindblad(Index n, int jump_count, Rng& rng) {
  Matrix g = random_gaussian(n, n, rng);
  Matrix h = 0.5 * (g + g.adjoint());
  std::vector<Matrix> jumps;
  for (int i = 0; i < jump_count; ++i) jumps.push_back(random_gaussian(n, n, rng));
  return LindbladGenerator::make(h, std::move(jumps));
}

/// Lindblad generator with a unique faithful stationary state.
inline LindbladGenerator random_lindblad_faithful(Index n, int jump_count, std::uint64_t seed,
                                                  double min_eig = 1e-4) {
  for (std::uint64_t attempt = 0; attempt < 256; ++attempt) {
    Rng rng(instance_seed(seed, attempt));
    LindbladGenerator gen = random_lindblad(n, jump_count, rng);
    if (stationary_space_dim(gen) != 1) continue;
    DensityState s = stationary_state(gen);
    if (!s.faithful || min_eigenvalue(s.rho) < min_eig) continue;
    return gen;
  }
  throw CheckError("random_lindblad_faithful: no admissible instance in 256 draws");
}

/// Random Popescu tensor: blocks of a random co-isometry from C^{kd} onto C^k.
inline PopescuTensor random_tensor(int d, int k, Rng& rng) {
  Matrix w = random_isometry(Index(k) * d, k, rng);
  std::vector<Matrix> ops;
  ops.reserve(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) ops.push_back(w.block(Index(i) * k, 0, k, k).adjoint());
  return PopescuTensor::make(std::move(ops));
}

}  // namespace qms

#endif
