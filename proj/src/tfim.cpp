#include <symnoise/tfim.hpp>

namespace symnoise {

void TfimConfig::validate() const {
  if (n < 2) throw ConfigError("tfim: n >= 2 required");
  if (n > 6 && !allow_large)
    throw ConfigError("tfim: n > 6 rejected by default (pass allow_large to override)");
  if (coupling == Coupling::Matrix) {
    if (j_matrix.rows() != n || j_matrix.cols() != n)
      throw ConfigError("tfim: J matrix must be n x n");
    if ((j_matrix - j_matrix.transpose()).cwiseAbs().maxCoeff() > 1e-12)
      throw ConfigError("tfim: J matrix must be symmetric");
    if (j_matrix.diagonal().cwiseAbs().maxCoeff() > 1e-12)
      throw ConfigError("tfim: J matrix must have zero diagonal");
  }
}

CMat build_tfim_hamiltonian(const TfimConfig& config) {
  config.validate();
  const int n = config.n;
  const int dim = 1 << n;
  CMat h0 = CMat::Zero(dim, dim);
  auto coupling = [&](int i, int j) -> double {
    switch (config.coupling) {
      case TfimConfig::Coupling::Complete: return config.j;
      case TfimConfig::Coupling::Chain: return j == i + 1 ? config.j : 0.0;
      case TfimConfig::Coupling::Matrix: return config.j_matrix(i, j);
    }
    return 0.0;
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double jij = coupling(i, j);
      if (jij != 0.0)
        h0 += jij * (pauli_on(n, i, pauli_z()) * pauli_on(n, j, pauli_z()));
    }
  for (int i = 0; i < n; ++i) h0 += config.h * pauli_on(n, i, pauli_x());
  return h0;
}

Schedule build_tfim(const TfimConfig& config, const TimeGrid& grid,
                    std::optional<CMat> symmetry) {
  Schedule s;
  s.grid = grid;
  s.hamiltonians.push_back(build_tfim_hamiltonian(config));
  s.symmetry = std::move(symmetry);
  s.validate();
  return s;
}

CMat build_j_squared(int n) {
  if (n < 1) throw ConfigError("build_j_squared: n >= 1 required");
  const int dim = 1 << n;
  CMat jx = CMat::Zero(dim, dim), jy = jx, jz = jx;
  for (int i = 0; i < n; ++i) {
    jx += 0.5 * pauli_on(n, i, pauli_x());
    jy += 0.5 * pauli_on(n, i, pauli_y());
    jz += 0.5 * pauli_on(n, i, pauli_z());
  }
  return jx * jx + jy * jy + jz * jz;
}

NoiseModel build_dephasing(int n, DephasingKind kind, const PsdSpec& psd) {
  NoiseModel model;
  for (int i = 0; i < n; ++i) model.channels.push_back({pauli_on(n, i, pauli_z()), psd});
  model.cross_correlation = kind == DephasingKind::Global ? NoiseModel::fully_correlated(n)
                                                          : NoiseModel::independent(n);
  model.validate();
  return model;
}

CMat plus_state_density(int n) {
  const int dim = 1 << n;
  CVec plus = CVec::Constant(dim, 1.0 / std::sqrt(double(dim)));
  return plus * plus.adjoint();
}

double default_time_step(const CMat& h0, double omega_uv) {
  Eigen::SelfAdjointEigenSolver<CMat> es(h0, Eigen::EigenvaluesOnly);
  const double norm = es.eigenvalues().cwiseAbs().maxCoeff();
  double dt = norm > 0 ? 1.0 / (10.0 * norm) : std::numeric_limits<double>::max();
  if (omega_uv > 0) dt = std::min(dt, M_PI / (4.0 * omega_uv));
  return dt;
}

}  // namespace symnoise
