#ifndef QMS_TYPES_HPP
#define QMS_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qms {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

// Default tolerances for double-precision dense algebra at dims <= 64.
// Every operation that uses one accepts an override.
namespace tol {
inline constexpr double herm = 1e-10;
inline constexpr double trace = 1e-10;
inline constexpr double psd = 1e-10;
inline constexpr double faithful = 1e-9;
inline constexpr double closure = 1e-9;
inline constexpr double peripheral = 1e-8;  // |lambda| >= 1 - peripheral counts as unimodular
inline constexpr double gram = 1e-8;        // rank decisions in Gram-Schmidt
inline constexpr double unital = 1e-8;
inline constexpr double invariant = 1e-8;
inline constexpr double rank = 1e-7;        // kernel dimension decisions
}  // namespace tol

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Malformed or inconsistent input data.
struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A structural identity the theory guarantees failed numerically.
struct CheckError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace qms

#endif
