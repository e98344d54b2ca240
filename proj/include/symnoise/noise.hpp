#pragma once

#include <symnoise/matrix_ops.hpp>
#include <symnoise/qbasis.hpp>

#include <cstdint>
#include <vector>

// Wide-sense-stationary zero-mean Gaussian noise with prescribed one-sided
// power spectral densities. Conventions, fixed project-wide:
//   S(omega) is tabulated for omega >= 0 (two-sided symmetric extension),
//   C(t) = (1/pi) int_0^inf S(omega) cos(omega t) domega,
//   so C(0) equals the synthesizer's variance.

namespace symnoise {

struct PsdSpec {
  enum class Kind { White, Pink, Lorentzian, Tabulated };
  Kind kind = Kind::White;

  double s0 = 0.0;         // white: flat level; lorentzian: C(0)
  double band_max = 0.0;   // white band edge, 0 = unbounded (delta kernel)
  double amplitude = 0.0;  // pink: S = amplitude / omega
  double omega_ir = 0.0;   // pink band
  double omega_uv = 0.0;
  double tau_c = 0.0;      // lorentzian: S = 2 s0 tau_c / (1 + (omega tau_c)^2)
  std::vector<double> omega_grid;  // tabulated, ascending
  std::vector<double> s_values;    // linear interpolation between nodes

  static PsdSpec white(double s0, double band_max = 0.0);
  static PsdSpec pink(double amplitude, double omega_ir, double omega_uv);
  static PsdSpec lorentzian(double s0, double tau_c);
  static PsdSpec tabulated(std::vector<double> omega, std::vector<double> s);

  bool same_spectrum(const PsdSpec& other) const;
  double value(double omega) const;
  double support_min() const;
  double support_max() const;  // quadrature/synthesis band edge
  // true for unbounded white noise: C(t) = s0 * delta(t)
  bool delta_like() const { return kind == Kind::White && band_max <= 0.0; }
  double max_value() const;  // S0 = max over the band
};

double autocorrelation(const PsdSpec& psd, double t);
// fit C(t) ~ C(0) exp(-t/tau) down to C(0)/e^2
double correlation_length(const PsdSpec& psd);

struct TimeGrid {
  double dt = 0.0;
  int steps = 0;  // K; nodes are t_k = k dt for k = 0..K

  double duration() const { return dt * steps; }
  double node(int k) const { return dt * k; }
  double midpoint(int k) const { return dt * (k + 0.5); }
};

struct NoiseChannel {
  CMat op;  // N_mu, traceless Hermitian
  PsdSpec psd;
};

struct NoiseModel {
  std::vector<NoiseChannel> channels;
  RMat cross_correlation;  // symmetric PSD, unit diagonal

  int channel_count() const { return static_cast<int>(channels.size()); }
  static RMat independent(int n);  // identity
  static RMat fully_correlated(int n);  // all ones

  void validate() const;  // correlation matrix shape/PSD/diagonal, operator checks
  // spec'd model assumption: channels classified symmetry-preserving and
  // symmetry-breaking must not be cross-correlated
  std::vector<std::string> validate_mode_separation(const QBasis& basis,
                                                    double tol = tol::block_zero) const;
  // symmetric square root of cross_correlation (eigenvalue clamping at 0)
  RMat correlation_sqrt() const;
  // Equivalent model with independent channels: groups of channels sharing a
  // PSD are rotated into the eigenbasis of their correlation block (a rank-1
  // all-ones block becomes one collective channel). The coherence parameters
  // are invariant; the absolute bound overlaps become physically meaningful.
  NoiseModel decorrelate() const;
  // C_{mu nu}(t): cross kernels use the geometric-mean spectrum convention
  double cross_kernel(int mu, int nu, double t) const;
  bool any_delta_like() const;
};

struct Trajectory {
  TimeGrid grid;
  uint64_t seed = 0;
  RMat nodes;      // (K+1) x channels, beta_mu(t_k)
  RMat midpoints;  // K x channels, beta_mu(t_k + dt/2)
};

// Harmonic-superposition synthesis on a midpoint mode grid; same
// (model, grid, seed, modes) always yields bit-identical samples.
Trajectory sample_trajectory(const NoiseModel& model, const TimeGrid& grid,
                             uint64_t seed, int modes = 512);

struct EmpiricalPsd {
  std::vector<double> omega;
  std::vector<RMat> spectra;  // per omega: channels x channels cross-spectral matrix
};

EmpiricalPsd empirical_psd(const NoiseModel& model, const TimeGrid& grid,
                           int64_t trajectories, uint64_t master_seed,
                           int modes = 512, int workers = 0);

// log-log slope of the diagonal spectrum of `channel` over [w_lo, w_hi]
double psd_loglog_slope(const EmpiricalPsd& psd, int channel, double w_lo, double w_hi);

}  // namespace symnoise
