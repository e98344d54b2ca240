#include <symnoise/propagation.hpp>
#include <symnoise/parallel.hpp>
#include <symnoise/rng.hpp>

#include <sstream>

namespace symnoise {

void Schedule::validate() const {
  if (grid.steps < 1 || grid.dt <= 0) throw ConfigError("schedule: empty time grid");
  if (hamiltonians.empty()) throw ConfigError("schedule: no Hamiltonians");
  if (hamiltonians.size() != 1 && static_cast<int>(hamiltonians.size()) != grid.steps)
    throw ConfigError("schedule: need 1 or K Hamiltonians");
  for (const auto& h : hamiltonians) require_hermitian(h, "schedule Hamiltonian");
  if (!symmetry) return;
  require_hermitian(*symmetry, "schedule symmetry");
  std::vector<int> offending;
  double worst = 0.0;
  const int distinct = static_cast<int>(hamiltonians.size());
  for (int k = 0; k < distinct; ++k) {
    const double scale = std::max(max_abs(hamiltonians[k]), 1e-300);
    const double c = max_abs(commutator(*symmetry, hamiltonians[k]));
    if (c > 1e-10 * scale) {
      offending.push_back(k);
      worst = std::max(worst, c / scale);
    }
  }
  if (!offending.empty()) {
    std::ostringstream os;
    os << "declared symmetry violated: max |[Q, H_0]| = " << worst
       << " (relative) at step" << (offending.size() > 1 ? "s" : "") << " ";
    for (size_t i = 0; i < std::min<size_t>(offending.size(), 12); ++i)
      os << (i ? "," : "") << offending[i];
    if (offending.size() > 12) os << ",...";
    throw InvariantError(os.str());
  }
}

IdealResult ideal_propagate(const Schedule& schedule, const CMat& rho0) {
  schedule.validate();
  const int k_steps = schedule.grid.steps;
  const int n = schedule.dim();
  require_same_dim(rho0, schedule.h_at(0), "ideal_propagate");

  IdealResult out;
  out.cache.grid = schedule.grid;
  out.cache.forward.reserve(k_steps + 1);
  out.cache.forward.push_back(CMat::Identity(n, n));
  if (schedule.hamiltonians.size() == 1) {
    // time-independent: one eigendecomposition serves every node
    Eigen::SelfAdjointEigenSolver<CMat> es(schedule.h_at(0));
    for (int k = 1; k <= k_steps; ++k) {
      CVec ph(n);
      const double t = schedule.grid.node(k);
      for (int j = 0; j < n; ++j) ph[j] = std::exp(Complex(0, -es.eigenvalues()[j] * t));
      out.cache.forward.push_back(es.eigenvectors() * ph.asDiagonal() *
                                  es.eigenvectors().adjoint());
    }
  } else {
    for (int k = 0; k < k_steps; ++k) {
      const CMat step = expm_hermitian_generator(schedule.h_at(k), schedule.grid.dt);
      out.cache.forward.push_back(step * out.cache.forward.back());
    }
  }
  const CMat& u_total = out.cache.forward.back();
  out.cache.anchored.reserve(k_steps + 1);
  for (int k = 0; k <= k_steps; ++k)
    out.cache.anchored.push_back(u_total * out.cache.forward[k].adjoint());
  out.rho_final = u_total * rho0 * u_total.adjoint();
  return out;
}

CMat noisy_trajectory(const Schedule& schedule, const NoiseModel& model,
                      const Trajectory& traj, const CMat& rho0,
                      const std::vector<int>& checkpoint_steps,
                      std::vector<CMat>* checkpoint_states) {
  if (traj.grid.steps != schedule.grid.steps ||
      std::abs(traj.grid.dt - schedule.grid.dt) > 1e-12 * schedule.grid.dt)
    throw ConfigError("noisy_trajectory: trajectory grid does not match schedule grid");
  const int n = schedule.dim();
  const int nch = model.channel_count();

  CMat u = CMat::Identity(n, n);
  CMat h(n, n);
  size_t next_cp = 0;
  for (int k = 0; k < schedule.grid.steps; ++k) {
    h = schedule.h_at(k);
    for (int mu = 0; mu < nch; ++mu) h += traj.midpoints(k, mu) * model.channels[mu].op;
    Eigen::SelfAdjointEigenSolver<CMat> es(h);
    CVec ph(n);
    for (int j = 0; j < n; ++j)
      ph[j] = std::exp(Complex(0, -es.eigenvalues()[j] * schedule.grid.dt));
    u = es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint() * u;
    if (checkpoint_states && next_cp < checkpoint_steps.size() &&
        checkpoint_steps[next_cp] == k + 1) {
      checkpoint_states->push_back(u * rho0 * u.adjoint());
      ++next_cp;
    }
  }
  return u * rho0 * u.adjoint();
}

StateEnsemble ensemble_average(const Schedule& schedule, const NoiseModel& model,
                               const EnsembleConfig& config, const CMat& rho0) {
  schedule.validate();
  model.validate();
  if (config.trajectories < 1) throw ConfigError("ensemble_average: M >= 1 required");
  const int n = schedule.dim();
  const size_t n_cp = config.checkpoint_steps.size();

  struct Partial {
    CMat sum;
    std::vector<CMat> cp_sums;
    std::vector<CMat> states;
  };
  auto make = [&] {
    Partial p;
    p.sum = CMat::Zero(n, n);
    p.cp_sums.assign(n_cp, CMat::Zero(n, n));
    return p;
  };
  auto body = [&](Partial& p, int64_t idx) {
    const int64_t draw = config.antithetic ? idx / 2 : idx;
    Trajectory traj = sample_trajectory(
        model, schedule.grid, derive_seed(config.master_seed, draw), config.synth_modes);
    if (config.antithetic && (idx % 2)) {
      traj.nodes = -traj.nodes;
      traj.midpoints = -traj.midpoints;
    }
    std::vector<CMat> cps;
    const CMat state = noisy_trajectory(schedule, model, traj, rho0,
                                        config.checkpoint_steps, n_cp ? &cps : nullptr);
    p.sum += state;
    for (size_t c = 0; c < n_cp; ++c) p.cp_sums[c] += cps[c];
    if (config.keep_states) p.states.push_back(state);
  };
  auto fold = [&](Partial& tot, const Partial& p) {
    tot.sum += p.sum;
    for (size_t c = 0; c < n_cp; ++c) tot.cp_sums[c] += p.cp_sums[c];
    if (config.keep_states)
      tot.states.insert(tot.states.end(), p.states.begin(), p.states.end());
  };

  Partial total =
      parallel_chunked<Partial>(config.trajectories, config.chunk_size,
                                resolve_workers(config.workers), make, body, fold);

  StateEnsemble out;
  out.count = config.trajectories;
  out.mean_state = total.sum / double(config.trajectories);
  out.statistical_floor = 1.0 / std::sqrt(double(config.trajectories));
  for (size_t c = 0; c < n_cp; ++c)
    out.checkpoint_means.push_back(total.cp_sums[c] / double(config.trajectories));
  if (config.keep_states) out.per_trajectory = std::move(total.states);
  return out;
}

}  // namespace symnoise
