#ifndef QMS_DILATION_HPP
#define QMS_DILATION_HPP

#include <cstdlib>
#include <string>
#include <utility>
#include <vector>

#include "qms/channel.hpp"
#include "qms/matrix_ops.hpp"
#include "qms/semigroup.hpp"
#include "qms/state.hpp"
#include "qms/types.hpp"

namespace qms {

inline long dilation_dim_cap() {
  if (const char* env = std::getenv("QDS_DIM_CAP")) {
    long v = std::atol(env);
    if (v > 0) return v;
  }
  return 200000;
}

// Dense operators on the dilated space are realized explicitly; above this
// dimension the property checks refuse instead of thrashing memory.
inline constexpr long kDenseRealizationCap = 2048;

/// Finite-horizon weak Markov process for a discrete-time channel.
///
/// Base space: column-stacked n x n matrices with inner product
/// <a,b> = tr(rho a^dag b); the representation is pi(x) = I kron x and the
/// cyclic vector is vec(rho^{1/2}). Level-t space is base kron noise^t, the
/// one-step embedding V: xi -> sum_i pi(l_i^dag) xi kron e_i satisfies
/// V^dag (pi(x) kron I) V = pi(tau(x)).
struct DilationSpace {
  CPMap map;           // Kraus-minimized, support-reduced when needed
  DensityState state;  // faithful on the carrier of map
  Index n = 0;         // algebra dimension
  int noise_dim = 0;   // m
  int horizon = 0;     // T
  Index base_dim = 0;  // n^2
  long total_dim = 0;  // n^2 m^T
  bool support_reduced = false;
  Matrix V;      // base -> base kron C^m
  Vector omega;  // Omega = iota_0 vec(rho^{1/2})
  std::vector<Matrix> iotas;  // iota_t: base kron noise^t -> total, 0..T

  const Matrix& iota(int t) const {
    if (t < 0 || t > horizon) throw DimensionError("iota: time outside horizon");
    return iotas[static_cast<std::size_t>(t)];
  }

  Matrix rep(const Matrix& x) const {  // pi(x) on the base space
    return kron(Matrix::Identity(n, n), x);
  }

  Matrix filtration(int t) const { return iota(t) * iota(t).adjoint(); }

  Matrix j(int t, const Matrix& x) const {
    if (x.rows() != n || x.cols() != n) throw DimensionError("j: observable dim mismatch");
    long mt = 1;
    for (int s = 0; s < t; ++s) mt *= noise_dim;
    Matrix inner = kron(rep(x), Matrix::Identity(mt, mt));
    return iota(t) * inner * iota(t).adjoint();
  }

  /// Extract y from an operator known to equal j_0(y).
  Matrix corner_observable(const Matrix& op) const {
    Matrix pi_y = iota(0).adjoint() * op * iota(0);
    return pi_y.topLeftCorner(n, n);
  }
};

inline DilationSpace build_dilation(const CPMap& map_in, const DensityState& state_in,
                                    int horizon, bool minimize = true,
                                    long cap = dilation_dim_cap()) {
  if (horizon < 1) throw ValidationError("build_dilation: horizon must be >= 1");
  detail::require_invariant(map_in, state_in);

  CPMap map = map_in;
  DensityState state = state_in;
  bool reduced = false;
  if (!state.faithful) {
    Projection p = support_projection(state);
    map = reduced_semigroup(map, p);
    state = compress_state(state, p);
    reduced = true;
  }
  if (minimize) map = minimize_kraus(map);

  Index n = map.dim;
  int m = static_cast<int>(map.kraus.size());
  double total = static_cast<double>(n) * static_cast<double>(n);
  for (int t = 0; t < horizon; ++t) total *= m;
  if (total > static_cast<double>(cap))
    throw ValidationError("build_dilation: n^2 m^T = " + std::to_string(static_cast<long>(total)) +
                          " exceeds the dimension cap " + std::to_string(cap));
  if (total > static_cast<double>(kDenseRealizationCap))
    throw ValidationError("build_dilation: dense realization above " +
                          std::to_string(kDenseRealizationCap) + " dimensions is not supported");

  DilationSpace d;
  d.map = map;
  d.state = state;
  d.n = n;
  d.noise_dim = m;
  d.horizon = horizon;
  d.base_dim = n * n;
  d.total_dim = static_cast<long>(total);
  d.support_reduced = reduced;

  d.V = Matrix::Zero(d.base_dim * m, d.base_dim);
  for (int i = 0; i < m; ++i) {
    Matrix e = Matrix::Zero(m, 1);
    e(i, 0) = 1.0;
    d.V += kron(d.rep(map.kraus[static_cast<std::size_t>(i)].adjoint()), e);
  }

  // V^(s): base -> base kron noise^s, new noise slot adjacent to the base
  std::vector<Matrix> vpow(static_cast<std::size_t>(horizon) + 1);
  vpow[0] = Matrix::Identity(d.base_dim, d.base_dim);
  long ms = 1;
  for (int s = 1; s <= horizon; ++s) {
    vpow[static_cast<std::size_t>(s)] =
        kron(d.V, Matrix::Identity(ms, ms)) * vpow[static_cast<std::size_t>(s - 1)];
    ms *= m;
  }
  d.iotas.resize(static_cast<std::size_t>(horizon) + 1);
  long mt = 1;
  for (int t = 0; t <= horizon; ++t) {
    d.iotas[static_cast<std::size_t>(t)] =
        kron(vpow[static_cast<std::size_t>(horizon - t)], Matrix::Identity(mt, mt));
    mt *= m;
  }

  Matrix sq = hermitian_sqrt(state.rho);
  d.omega = d.iota(0) * vectorize(sq);
  return d;
}

struct CheckReport {
  double max_residual = 0.0;
  bool pass = false;
};

/// F_s] j_t(x) F_s] = j_s(tau_{t-s}(x)) over all 0 <= s <= t <= T and an HS
/// basis of observables.
inline CheckReport markov_property_check(const DilationSpace& d, double eps = 1e-10) {
  auto units = matrix_unit_basis(d.n);
  double worst = 0.0;
  for (int t = 0; t <= d.horizon; ++t) {
    std::vector<Matrix> jt;
    jt.reserve(units.size());
    for (const auto& x : units) jt.push_back(d.j(t, x));
    for (int s = 0; s <= t; ++s) {
      for (std::size_t k = 0; k < units.size(); ++k) {
        Matrix x = units[k];
        for (int step = 0; step < t - s; ++step) x = d.map.apply(x);
        Matrix lhs = d.iota(s) * (d.iota(s).adjoint() * jt[k] * d.iota(s)) * d.iota(s).adjoint();
        worst = std::max(worst, (lhs - d.j(s, x)).norm());
      }
    }
  }
  return CheckReport{worst, worst <= eps};
}

/// F_0] shift_t(X) F_0] = j_0(tau_t(y)) where F_0] X F_0] = j_0(y), for
/// monomials X = j_{t_1}(x_1) ... j_{t_r}(x_r), r <= 3, times below the
/// horizon, and every shift that keeps the monomial inside the window.
inline CheckReport compression_check(const DilationSpace& d, double eps = 1e-10) {
  auto units = matrix_unit_basis(d.n);
  double worst = 0.0;
  Matrix f0 = d.filtration(0);

  auto run_case = [&](const std::vector<std::pair<int, Matrix>>& factors) {
    int tmax = 0;
    for (const auto& [t, x] : factors) tmax = std::max(tmax, t);
    Matrix big = Matrix::Identity(d.total_dim, d.total_dim);
    for (const auto& [t, x] : factors) big = big * d.j(t, x);
    Matrix y = d.corner_observable(f0 * big * f0);
    for (int shift = 1; shift + tmax <= d.horizon; ++shift) {
      Matrix shifted = Matrix::Identity(d.total_dim, d.total_dim);
      for (const auto& [t, x] : factors) shifted = shifted * d.j(t + shift, x);
      Matrix ys = y;
      for (int step = 0; step < shift; ++step) ys = d.map.apply(ys);
      Matrix lhs = f0 * shifted * f0;
      worst = std::max(worst, (lhs - d.j(0, ys)).norm());
    }
  };

  for (int t = 0; t < d.horizon; ++t)
    for (const auto& x : units) run_case({{t, x}});

  // a deterministic spread of pairs and triples; times nonincreasing left to right
  std::vector<std::pair<std::size_t, std::size_t>> unit_pairs;
  for (std::size_t a = 0; a < units.size(); ++a)
    unit_pairs.emplace_back(a, (a * 2 + 1) % units.size());
  for (int t1 = 0; t1 < d.horizon; ++t1)
    for (int t0 = 0; t0 <= t1; ++t0)
      for (const auto& [a, b] : unit_pairs)
        run_case({{t1, units[a]}, {t0, units[b]}});
  if (d.horizon >= 2) {
    for (std::size_t a = 0; a < units.size(); ++a) {
      std::size_t b = (a + 1) % units.size(), c = (a + 2) % units.size();
      run_case({{1, units[a]}, {1, units[b]}, {0, units[c]}});
    }
  }
  return CheckReport{worst, worst <= eps};
}

struct CyclicityReport {
  int reached_dim = 0;
  bool cyclic = false;
};

/// Dimension of span{ j_{t_r}(x_r) ... j_{t_1}(x_1) Omega } with
/// 0 <= t_1 <= ... <= t_r <= T and r <= T+1, by greedy Gram-Schmidt.
/// basis_rotation, when nonempty, replaces the matrix-unit observable basis
/// by another HS-orthonormal one.
inline CyclicityReport cyclicity_check(const DilationSpace& d, double eps = tol::gram,
                                       const std::vector<Matrix>& basis_rotation = {}) {
  std::vector<Matrix> obs = basis_rotation.empty() ? matrix_unit_basis(d.n) : basis_rotation;
  std::vector<std::vector<Matrix>> jt(static_cast<std::size_t>(d.horizon) + 1);
  for (int t = 0; t <= d.horizon; ++t)
    for (const auto& x : obs) jt[static_cast<std::size_t>(t)].push_back(d.j(t, x));

  std::vector<Vector> onb;
  auto add = [&](Vector v) {
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : onb) v -= b.dot(v) * b;
    double nv = v.norm();
    if (nv <= eps) return false;
    onb.push_back(v / nv);
    return true;
  };

  add(d.omega);
  struct Node {
    Vector v;
    int min_time;
  };
  std::vector<Node> frontier{{d.omega, 0}};
  for (int depth = 1; depth <= d.horizon + 1 && !frontier.empty(); ++depth) {
    std::vector<Node> next;
    for (const auto& node : frontier) {
      for (int t = node.min_time; t <= d.horizon; ++t) {
        for (const auto& op : jt[static_cast<std::size_t>(t)]) {
          Vector w = op * node.v;
          if (w.norm() <= 1e-14) continue;
          if (add(w)) next.push_back({w, t});
          if (static_cast<long>(onb.size()) == d.total_dim) break;
        }
        if (static_cast<long>(onb.size()) == d.total_dim) break;
      }
      if (static_cast<long>(onb.size()) == d.total_dim) break;
    }
    if (static_cast<long>(onb.size()) == d.total_dim) break;
    frontier = std::move(next);
  }
  CyclicityReport r;
  r.reached_dim = static_cast<int>(onb.size());
  r.cyclic = static_cast<long>(onb.size()) == d.total_dim;
  return r;
}

/// c_n = max over HS-basis pairs of |phi0(tau^n(x) tau^n(y)) - phi0(x) phi0(y)|.
inline std::vector<double> kolmogorov_correlation_profile(const CPMap& map,
                                                          const DensityState& state,
                                                          int n_max) {
  return correlation_profile(map, state, n_max);
}

}  // namespace qms

#endif
