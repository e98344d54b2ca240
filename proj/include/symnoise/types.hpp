#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace symnoise {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

// Tolerances used throughout; fixed for double precision at N <= 64.
namespace tol {
inline constexpr double hermitian = 1e-12;   // relative, max|A - A^dag| / max|A|
inline constexpr double unitary = 1e-10;     // max|U^dag U - 1|
inline constexpr double basis_ortho = 1e-10; // pairwise HS inner products
inline constexpr double block_zero = 1e-9;   // relative, structural-zero claims
}  // namespace tol

// Invalid user input: configs, malformed files, bad dimensions. CLI exit code 1.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A mathematical contract was violated at runtime (non-Hermitian input where
// Hermitian is required, symmetry declaration that does not hold, ...).
// CLI exit code 2.
struct InvariantError : std::runtime_error {
  explicit InvariantError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace symnoise
