#pragma once

#include <symnoise/propagation.hpp>
#include <symnoise/superop.hpp>

// Filter-function-formalism engine: control matrix in the Q-basis, coherence
// parameters chi1/chi2 (time-domain double integral as the source of truth,
// frequency-domain overlap as a consistency route), the second-order cumulant
// superoperator C(T), its structural checks, distance bounds and steady
// states.
//
// Sign convention, pinned by the exact single-qubit Gaussian dephasing
// channel:  C(T) = sum_ij chi1_ij [x_i,[x_j,.]] + chi2_ij [[x_i,x_j],.],
//           chi1 = -(L + L^T)/2,  chi2 = -(L - L^T)/4,
//           L_ij = sum_{mu nu} double-int_{0<=t2<=t1<=T}
//                  C_{mu nu}(t1-t2) r_{mu i}(t1) r_{nu j}(t2).

namespace symnoise {

struct ControlMatrixOptions {
  bool with_square_form = false;
  double block_tol = tol::block_zero;
};

struct ControlMatrix {
  TimeGrid grid;
  std::vector<RMat> r;       // K+1 entries of (channels x nb)
  std::vector<RMat> square;  // optional: K+1 entries of (nb x nb)
  double max_entry = 0.0;
  double cross_class_max = 0.0;  // Eq. (6) diagnostic, relative to max_entry
  std::vector<int> support;      // direction indices with nonzero r somewhere
};

ControlMatrix control_matrix(const PropagatorCache& cache, const QBasis& basis,
                             const NoiseModel& model,
                             const ControlMatrixOptions& opts = {});

struct CoherenceParams {
  RMat chi1;    // symmetric
  RMat chi2;    // antisymmetric
  RMat lambda;  // raw ordered double integral
};

CoherenceParams coherence_params(const ControlMatrix& cm, const NoiseModel& model);

// r-tilde(omega) = int_0^T e^{i omega t} r(t) dt on a uniform omega grid
struct FilterFunctions {
  std::vector<double> omega;
  double domega = 0.0;
  std::vector<Eigen::MatrixXcd> rtilde;  // per channel: (n_omega x nb)
};

FilterFunctions filter_functions(const ControlMatrix& cm, const NoiseModel& model,
                                 int n_omega = 1200);

// frequency-domain route for chi1/chi2 restricted to the support directions
CoherenceParams coherence_params_frequency(const ControlMatrix& cm,
                                           const NoiseModel& model,
                                           const FilterFunctions& ffs);

struct CumulantSuperoperator {
  RMat chi1, chi2;
  RMat liouville;  // (nb+1) x (nb+1), identity direction first
  RMat sym, asym;
  double norm_max = 0.0;  // max |entry| of liouville
};

CumulantSuperoperator assemble_cumulant(const RMat& chi1, const RMat& chi2,
                                        const QBasis& basis);

struct SpectrumReport {
  double sym_max_eigenvalue = 0.0;
  double sym_scale = 0.0;          // max |eigenvalue| of the symmetric part
  double identity_action = 0.0;    // max |C e_0|, |e_0^T C|
  double asym_max_real_part = 0.0;
  double slowest_nonzero_rate = 0.0;
};

SpectrumReport cumulant_spectrum(const CumulantSuperoperator& c);

enum class NoiseClass { Preserving, Breaking };

struct StructureReport {
  std::vector<GenLabel> class_order;
  RMat class_coupling;  // max |entry| between label classes (plus identity row/col 0)

  // preserving-noise checks
  double centralizer_ladder_coupling = 0.0;  // either direction
  double ladder_cross_class_coupling = 0.0;
  double block_support_leak = 0.0;  // sector-q-supported ops must stay in sector q

  // breaking-noise checks, relative to the given SPS sector
  double sector_to_ladder = 0.0;        // must vanish: no cross-sector coherences
  double sector_to_cartan = 0.0;        // diagonal leakage, expected nonzero
  double sector_to_other_within = 0.0;  // reported; see README on Eq. (8)

  double scale = 0.0;  // max |entry| of the cumulant
  bool pass = false;
  std::vector<std::string> offending;
};

StructureReport structure_check(const CumulantSuperoperator& c, const QBasis& basis,
                                NoiseClass noise_class, int sps_sector,
                                double rel_tol = tol::block_zero);

// full exponential exp(C) applied to rho_0(T); first_order uses 1 + C
CMat predict_average_state(const CumulantSuperoperator& c, const CMat& rho0_final,
                           const QBasis& basis, bool first_order = false);

struct BoundReport {
  double measured_distance = 0.0;  // D = (1/2) ||C[rho_0(T)]||_1
  double eq9_symmetric = 0.0;
  double eq9_nonsymmetric = 0.0;
  double eq9_total = 0.0;
  double eq10_white = 0.0;
  double s0_max = 0.0;
  int sps_sector = -1;
};

BoundReport distance_and_bounds(const CumulantSuperoperator& c, const CMat& rho0_final,
                                const ControlMatrix& cm, const NoiseModel& model,
                                const QBasis& basis, int sps_sector,
                                const FilterFunctions& ffs);

struct SteadyStateReport {
  CMat predicted;     // maximally mixed on sector q (preserving) or 1/N (breaking)
  CMat extrapolated;  // limit of exp(sC)[rho_0(T)]
  double distance = 0.0;  // trace distance between the two
  int kernel_dim_sym = 0;
  int stationary_dim_reachable = 0;  // ker C within the Krylov span of rho_0(T)
  double slowest_rate = 0.0;
  std::vector<std::string> warnings;
};

SteadyStateReport steady_state(const CumulantSuperoperator& c, const QBasis& basis,
                               int sector, NoiseClass noise_class, const CMat& rho0_final);

}  // namespace symnoise
