#include <symnoise/matrix_ops.hpp>

#include <Eigen/SVD>

namespace symnoise {

double max_abs(const CMat& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().maxCoeff();
}

bool is_hermitian(const CMat& a, double rel_tol) {
  const double scale = std::max(max_abs(a), 1e-300);
  return max_abs(CMat(a - a.adjoint())) <= rel_tol * scale;
}

bool is_unitary(const CMat& u, double abs_tol) {
  if (u.rows() != u.cols()) return false;
  CMat g = u.adjoint() * u;
  g.diagonal().array() -= 1.0;
  return max_abs(g) <= abs_tol;
}

void require_hermitian(const CMat& a, const char* who) {
  if (!is_hermitian(a))
    throw InvariantError(std::string(who) + ": matrix is not Hermitian");
}

void require_unitary(const CMat& u, const char* who) {
  if (!is_unitary(u))
    throw InvariantError(std::string(who) + ": matrix is not unitary");
}

void require_same_dim(const CMat& a, const CMat& b, const char* who) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ConfigError(std::string(who) + ": dimension mismatch (" +
                      std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " vs " +
                      std::to_string(b.rows()) + "x" + std::to_string(b.cols()) + ")");
}

CMat commutator(const CMat& a, const CMat& b) {
  require_same_dim(a, b, "commutator");
  return a * b - b * a;
}

Complex hs_inner(const CMat& a, const CMat& b) {
  require_same_dim(a, b, "hs_inner");
  return (a.adjoint() * b).trace();
}

double hs_norm(const CMat& a) { return a.norm(); }

CMat expm_hermitian_generator(const CMat& h, double t) {
  require_hermitian(h, "expm_hermitian_generator");
  Eigen::SelfAdjointEigenSolver<CMat> es(h);
  CVec phase(h.rows());
  for (Eigen::Index k = 0; k < h.rows(); ++k)
    phase[k] = std::exp(Complex(0.0, -es.eigenvalues()[k] * t));
  return es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint();
}

CMat adjoint_action(const CMat& u, const CMat& x) {
  require_unitary(u, "adjoint_action");
  require_same_dim(u, x, "adjoint_action");
  return u * x * u.adjoint();
}

double trace_norm(const CMat& a) {
  Eigen::JacobiSVD<CMat> svd(a);
  return svd.singularValues().sum();
}

double trace_distance(const CMat& a, const CMat& b) {
  require_same_dim(a, b, "trace_distance");
  return 0.5 * trace_norm(CMat(a - b));
}

CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

const CMat& pauli_x() {
  static const CMat m = [] {
    CMat p(2, 2);
    p << 0, 1, 1, 0;
    return p;
  }();
  return m;
}

const CMat& pauli_y() {
  static const CMat m = [] {
    CMat p(2, 2);
    p << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
    return p;
  }();
  return m;
}

const CMat& pauli_z() {
  static const CMat m = [] {
    CMat p(2, 2);
    p << 1, 0, 0, -1;
    return p;
  }();
  return m;
}

CMat pauli_on(int n_qubits, int site, const CMat& p) {
  if (site < 0 || site >= n_qubits)
    throw ConfigError("pauli_on: site " + std::to_string(site) + " out of range");
  CMat out = CMat::Identity(1, 1);
  for (int i = 0; i < n_qubits; ++i)
    out = kron(out, i == site ? p : CMat(CMat::Identity(2, 2)));
  return out;
}

}  // namespace symnoise
