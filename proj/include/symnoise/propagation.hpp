#pragma once

#include <symnoise/noise.hpp>

#include <optional>

// Time-ordered propagation on a uniform grid with piecewise-constant
// Hamiltonians, and Monte Carlo averaging over noise trajectories with a
// deterministic chunked reduction (results do not depend on worker count).

namespace symnoise {

struct Schedule {
  TimeGrid grid;
  // either one entry (time-independent) or one per step
  std::vector<CMat> hamiltonians;
  std::optional<CMat> symmetry;  // declared Q with [Q, H_0(t)] = 0

  int dim() const { return static_cast<int>(hamiltonians.at(0).rows()); }
  const CMat& h_at(int step) const {
    return hamiltonians.size() == 1 ? hamiltonians[0] : hamiltonians.at(step);
  }
  // throws InvariantError listing offending steps if the declared symmetry
  // does not commute with H_0
  void validate() const;
};

struct PropagatorCache {
  TimeGrid grid;
  std::vector<CMat> forward;   // U_0(t_k, 0), k = 0..K
  std::vector<CMat> anchored;  // U_0(T, t_k) = U_0(T,0) U_0(t_k,0)^dag

  const CMat& total() const { return forward.back(); }
};

struct IdealResult {
  PropagatorCache cache;
  CMat rho_final;
};

IdealResult ideal_propagate(const Schedule& schedule, const CMat& rho0);

// Single noisy trajectory with midpoint noise sampling:
// exp(-i [H_0(t_k) + sum_mu beta_mu(t_k + dt/2) N_mu] dt) per step.
// If checkpoint_steps is non-empty, the state after each listed step index is
// appended to *checkpoint_states.
CMat noisy_trajectory(const Schedule& schedule, const NoiseModel& model,
                      const Trajectory& traj, const CMat& rho0,
                      const std::vector<int>& checkpoint_steps = {},
                      std::vector<CMat>* checkpoint_states = nullptr);

struct EnsembleConfig {
  int64_t trajectories = 1;
  uint64_t master_seed = 0;
  int workers = 0;       // 0 = resolve from env/hardware
  int chunk_size = 64;   // reduction granularity (fixed => deterministic)
  int synth_modes = 512;
  bool keep_states = false;
  // pair trajectory 2k+1 with the sign-flipped realization of 2k; unbiased
  // for zero-mean Gaussian noise and cancels the odd-order fluctuations
  bool antithetic = false;
  std::vector<int> checkpoint_steps;
};

struct StateEnsemble {
  int64_t count = 0;
  CMat mean_state;
  double statistical_floor = 0.0;  // 1/sqrt(count)
  std::vector<CMat> checkpoint_means;
  std::vector<CMat> per_trajectory;  // only when keep_states
};

StateEnsemble ensemble_average(const Schedule& schedule, const NoiseModel& model,
                               const EnsembleConfig& config, const CMat& rho0);

}  // namespace symnoise
