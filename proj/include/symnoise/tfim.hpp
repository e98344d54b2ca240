#pragma once

#include <symnoise/propagation.hpp>

// Transverse-field Ising scenario building blocks: H_0, the J^2 symmetry
// operator, and global/local dephasing noise models.

namespace symnoise {

struct TfimConfig {
  int n = 2;
  enum class Coupling { Complete, Chain, Matrix } coupling = Coupling::Complete;
  double j = 1.0;  // coupling strength for Complete/Chain
  double h = 1.0;  // transverse field
  RMat j_matrix;   // explicit couplings, symmetric with zero diagonal
  bool allow_large = false;  // lifts the n <= 6 guard

  void validate() const;
};

// H_0 = sum_{i<j} J_ij sigma^z_i sigma^z_j + h sum_i sigma^x_i
CMat build_tfim_hamiltonian(const TfimConfig& config);

// time-independent schedule over the given grid, with optional declared symmetry
Schedule build_tfim(const TfimConfig& config, const TimeGrid& grid,
                    std::optional<CMat> symmetry);

// J^2 = Jx^2 + Jy^2 + Jz^2 with J_a = (1/2) sum_i sigma_a^(i)
CMat build_j_squared(int n);

enum class DephasingKind { Global, Local };

// n channels with operator sigma_z^(i); global = all-ones correlation,
// local = independent channels
NoiseModel build_dephasing(int n, DephasingKind kind, const PsdSpec& psd);

// |+>^{otimes n}
CMat plus_state_density(int n);

// default step: min(1/(10 ||H_0||), pi/(4 omega_uv))
double default_time_step(const CMat& h0, double omega_uv);

}  // namespace symnoise
