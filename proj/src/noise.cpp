#include <symnoise/noise.hpp>
#include <symnoise/parallel.hpp>
#include <symnoise/rng.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace symnoise {

PsdSpec PsdSpec::white(double s0, double band_max) {
  if (s0 < 0) throw ConfigError("white PSD: S0 must be >= 0");
  PsdSpec p;
  p.kind = Kind::White;
  p.s0 = s0;
  p.band_max = band_max;
  return p;
}

PsdSpec PsdSpec::pink(double amplitude, double omega_ir, double omega_uv) {
  if (amplitude < 0 || omega_ir <= 0 || omega_uv <= omega_ir)
    throw ConfigError("pink PSD requires amplitude >= 0 and 0 < omega_ir < omega_uv");
  PsdSpec p;
  p.kind = Kind::Pink;
  p.amplitude = amplitude;
  p.omega_ir = omega_ir;
  p.omega_uv = omega_uv;
  return p;
}

PsdSpec PsdSpec::lorentzian(double s0, double tau_c) {
  if (s0 < 0 || tau_c <= 0) throw ConfigError("lorentzian PSD requires S0 >= 0, tau_c > 0");
  PsdSpec p;
  p.kind = Kind::Lorentzian;
  p.s0 = s0;
  p.tau_c = tau_c;
  return p;
}

PsdSpec PsdSpec::tabulated(std::vector<double> omega, std::vector<double> s) {
  if (omega.size() != s.size() || omega.size() < 2)
    throw ConfigError("tabulated PSD needs matching grids with >= 2 points");
  for (size_t i = 0; i < omega.size(); ++i) {
    if (i > 0 && omega[i] <= omega[i - 1])
      throw ConfigError("tabulated PSD grid must be strictly ascending");
    if (s[i] < 0) throw ConfigError("tabulated PSD must be nonnegative");
    if (omega[i] < 0) throw ConfigError("tabulated PSD grid must be nonnegative");
  }
  PsdSpec p;
  p.kind = Kind::Tabulated;
  p.omega_grid = std::move(omega);
  p.s_values = std::move(s);
  return p;
}

bool PsdSpec::same_spectrum(const PsdSpec& o) const {
  return kind == o.kind && s0 == o.s0 && band_max == o.band_max &&
         amplitude == o.amplitude && omega_ir == o.omega_ir && omega_uv == o.omega_uv &&
         tau_c == o.tau_c && omega_grid == o.omega_grid && s_values == o.s_values;
}

double PsdSpec::value(double w) const {
  if (w < support_min() || w > support_max()) return 0.0;
  switch (kind) {
    case Kind::White:
      return s0;
    case Kind::Pink:
      return amplitude / w;
    case Kind::Lorentzian:
      return 2.0 * s0 * tau_c / (1.0 + (w * tau_c) * (w * tau_c));
    case Kind::Tabulated: {
      auto it = std::upper_bound(omega_grid.begin(), omega_grid.end(), w);
      if (it == omega_grid.begin()) return s_values.front();
      if (it == omega_grid.end()) return s_values.back();
      const size_t hi = it - omega_grid.begin();
      const double f = (w - omega_grid[hi - 1]) / (omega_grid[hi] - omega_grid[hi - 1]);
      return (1 - f) * s_values[hi - 1] + f * s_values[hi];
    }
  }
  return 0.0;
}

double PsdSpec::support_min() const {
  switch (kind) {
    case Kind::Pink: return omega_ir;
    case Kind::Tabulated: return omega_grid.front();
    default: return 0.0;
  }
}

double PsdSpec::support_max() const {
  switch (kind) {
    case Kind::White:
      if (band_max <= 0) throw ConfigError("white PSD without band edge has no finite support");
      return band_max;
    case Kind::Pink: return omega_uv;
    // S drops below ~2.4e-4 of its peak at the chosen edge; the clipped
    // variance is ~1% which keeps correlation_length within its 2% contract
    case Kind::Lorentzian: return 64.0 / tau_c;
    case Kind::Tabulated: return omega_grid.back();
  }
  return 0.0;
}

double PsdSpec::max_value() const {
  switch (kind) {
    case Kind::White: return s0;
    case Kind::Pink: return amplitude / omega_ir;
    case Kind::Lorentzian: return 2.0 * s0 * tau_c;
    case Kind::Tabulated: return *std::max_element(s_values.begin(), s_values.end());
  }
  return 0.0;
}

namespace {

// composite Simpson with panel density matched to the cos(omega t) oscillation
double integrate_s_cos(const PsdSpec& psd, double t, double a, double b) {
  const double osc = std::abs(t) * (b - a) / (2.0 * M_PI);
  int panels = static_cast<int>(std::max(512.0, 24.0 * osc));
  panels = std::min(panels, 4000000);
  if (panels % 2) ++panels;
  const double h = (b - a) / panels;
  auto f = [&](double w) { return psd.value(w) * std::cos(w * t); };
  double sum = f(a) + f(b);
  for (int k = 1; k < panels; ++k) sum += f(a + k * h) * (k % 2 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

}  // namespace

double autocorrelation(const PsdSpec& psd, double t) {
  if (psd.delta_like())
    throw ConfigError("autocorrelation: unbounded white noise has a delta kernel");
  const double a = psd.support_min();
  const double b = psd.support_max();
  if (b <= a) return 0.0;
  return integrate_s_cos(psd, t, a, b) / M_PI;
}

double correlation_length(const PsdSpec& psd) {
  const double c0 = autocorrelation(psd, 0.0);
  if (c0 <= 0) throw ConfigError("correlation_length: C(0) must be positive");
  const double target = c0 * std::exp(-2.0);

  // bracket the first crossing of C(0)/e^2 by geometric scan
  const double t_unit = 1.0 / psd.support_max();
  double t_lo = 0.0, t_hi = 0.0;
  double t = t_unit * 0.25;
  for (int it = 0; it < 200; ++it) {
    const double c = autocorrelation(psd, t);
    if (c < target) {
      t_hi = t;
      break;
    }
    t_lo = t;
    t *= 1.35;
  }
  if (t_hi == 0.0)
    throw ConfigError("correlation_length: autocorrelation does not decay below C(0)/e^2");
  for (int it = 0; it < 40; ++it) {
    const double mid = 0.5 * (t_lo + t_hi);
    (autocorrelation(psd, mid) < target ? t_hi : t_lo) = mid;
  }
  const double t_star = 0.5 * (t_lo + t_hi);

  // least squares of ln(C/C0) = -t/tau through the origin, over [0, t_star]
  const int samples = 200;
  double num = 0.0, den = 0.0;
  for (int i = 1; i <= samples; ++i) {
    const double ti = t_star * i / samples;
    const double c = autocorrelation(psd, ti);
    if (c <= 0) break;
    num += ti * std::log(c / c0);
    den += ti * ti;
  }
  if (den == 0 || num >= 0)
    throw ConfigError("correlation_length: no finite correlation length");
  return -den / num;
}

RMat NoiseModel::independent(int n) { return RMat::Identity(n, n); }
RMat NoiseModel::fully_correlated(int n) { return RMat::Ones(n, n); }

void NoiseModel::validate() const {
  const int n = channel_count();
  if (n == 0) throw ConfigError("noise model has no channels");
  if (cross_correlation.rows() != n || cross_correlation.cols() != n)
    throw ConfigError("cross_correlation size does not match channel count");
  if ((cross_correlation - cross_correlation.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw ConfigError("cross_correlation must be symmetric");
  for (int i = 0; i < n; ++i)
    if (std::abs(cross_correlation(i, i) - 1.0) > 1e-12)
      throw ConfigError("cross_correlation must have unit diagonal");
  Eigen::SelfAdjointEigenSolver<RMat> es(cross_correlation);
  if (es.eigenvalues().minCoeff() < -1e-10)
    throw ConfigError("cross_correlation must be positive semidefinite");
  for (const auto& ch : channels) {
    require_hermitian(ch.op, "noise channel operator");
    if (std::abs(ch.op.trace()) > 1e-10 * std::max(1.0, max_abs(ch.op)))
      throw InvariantError("noise channel operator must be traceless");
    if (ch.op.rows() != channels.front().op.rows())
      throw ConfigError("noise channel operator dimensions differ");
  }
}

std::vector<std::string> NoiseModel::validate_mode_separation(const QBasis& basis,
                                                              double tol) const {
  std::vector<std::string> violations;
  std::vector<bool> preserving(channel_count());
  for (int mu = 0; mu < channel_count(); ++mu)
    preserving[mu] = classify_operator(channels[mu].op, basis, tol).symmetry_preserving;
  for (int mu = 0; mu < channel_count(); ++mu)
    for (int nu = mu + 1; nu < channel_count(); ++nu)
      if (preserving[mu] != preserving[nu] &&
          std::abs(cross_correlation(mu, nu)) > 1e-12) {
        std::ostringstream os;
        os << "channels " << mu << " (" << (preserving[mu] ? "preserving" : "breaking")
           << ") and " << nu << " (" << (preserving[nu] ? "preserving" : "breaking")
           << ") are cross-correlated: " << cross_correlation(mu, nu);
        violations.push_back(os.str());
      }
  return violations;
}

RMat NoiseModel::correlation_sqrt() const {
  Eigen::SelfAdjointEigenSolver<RMat> es(cross_correlation);
  RVec lam = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
}

double NoiseModel::cross_kernel(int mu, int nu, double t) const {
  const double corr = cross_correlation(mu, nu);
  if (corr == 0.0) return 0.0;
  const PsdSpec& pa = channels[mu].psd;
  const PsdSpec& pb = channels[nu].psd;
  if (pa.same_spectrum(pb)) return corr * autocorrelation(pa, t);
  // geometric-mean cross spectrum over the band intersection
  const double a = std::max(pa.support_min(), pb.support_min());
  const double b = std::min(pa.support_max(), pb.support_max());
  if (b <= a) return 0.0;
  const double osc = std::abs(t) * (b - a) / (2.0 * M_PI);
  int panels = static_cast<int>(std::max(512.0, 24.0 * osc));
  if (panels % 2) ++panels;
  const double h = (b - a) / panels;
  auto f = [&](double w) { return std::sqrt(pa.value(w) * pb.value(w)) * std::cos(w * t); };
  double sum = f(a) + f(b);
  for (int k = 1; k < panels; ++k) sum += f(a + k * h) * (k % 2 ? 4.0 : 2.0);
  return corr * sum * h / (3.0 * M_PI);
}

NoiseModel NoiseModel::decorrelate() const {
  validate();
  const int n = channel_count();
  std::vector<int> group(n, -1);
  std::vector<int> rep;  // representative channel per group
  for (int mu = 0; mu < n; ++mu) {
    for (size_t g = 0; g < rep.size(); ++g)
      if (channels[mu].psd.same_spectrum(channels[rep[g]].psd)) group[mu] = int(g);
    if (group[mu] < 0) {
      group[mu] = int(rep.size());
      rep.push_back(mu);
    }
  }
  for (int mu = 0; mu < n; ++mu)
    for (int nu = 0; nu < n; ++nu)
      if (group[mu] != group[nu] && cross_correlation(mu, nu) != 0.0)
        throw ConfigError(
            "decorrelate: correlated channels with different spectra are not supported");

  NoiseModel out;
  for (size_t g = 0; g < rep.size(); ++g) {
    std::vector<int> members;
    for (int mu = 0; mu < n; ++mu)
      if (group[mu] == int(g)) members.push_back(mu);
    const int m = static_cast<int>(members.size());
    RMat block(m, m);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) block(a, b) = cross_correlation(members[a], members[b]);
    Eigen::SelfAdjointEigenSolver<RMat> es(block);
    for (int r = 0; r < m; ++r) {
      const double lam = es.eigenvalues()[r];
      if (lam <= 1e-12 * es.eigenvalues().cwiseAbs().maxCoeff()) continue;
      CMat op = CMat::Zero(channels[0].op.rows(), channels[0].op.cols());
      for (int a = 0; a < m; ++a)
        op += std::sqrt(lam) * es.eigenvectors()(a, r) * channels[members[a]].op;
      out.channels.push_back({std::move(op), channels[rep[g]].psd});
    }
  }
  out.cross_correlation = independent(out.channel_count());
  return out;
}

bool NoiseModel::any_delta_like() const {
  for (const auto& ch : channels)
    if (ch.psd.delta_like()) return true;
  return false;
}

Trajectory sample_trajectory(const NoiseModel& model, const TimeGrid& grid,
                             uint64_t seed, int modes) {
  model.validate();
  if (grid.steps < 2 || grid.dt <= 0) throw ConfigError("sample_trajectory: K >= 2 required");
  const int nch = model.channel_count();

  // Nyquist guard against the widest band
  double w_max = 0.0;
  for (const auto& ch : model.channels) w_max = std::max(w_max, ch.psd.support_max());
  if (grid.dt >= M_PI / w_max)
    throw ConfigError("sample_trajectory: dt violates Nyquist for the PSD band (dt >= pi/omega_uv)");

  const RMat lmat = model.correlation_sqrt();

  Trajectory traj;
  traj.grid = grid;
  traj.seed = seed;
  const int half_steps = 2 * grid.steps;  // half-step grid covers nodes and midpoints
  traj.nodes = RMat::Zero(grid.steps + 1, nch);
  traj.midpoints = RMat::Zero(grid.steps, nch);

  Rng rng(seed);
  // mode amplitudes per channel (midpoint mode grid over each channel's band)
  std::vector<RVec> amp(nch), omega(nch);
  for (int ch = 0; ch < nch; ++ch) {
    const PsdSpec& psd = model.channels[ch].psd;
    const double a = psd.support_min();
    const double b = psd.support_max();
    const double dw = (b - a) / modes;
    amp[ch].resize(modes);
    omega[ch].resize(modes);
    for (int m = 0; m < modes; ++m) {
      omega[ch][m] = a + (m + 0.5) * dw;
      amp[ch][m] = std::sqrt(psd.value(omega[ch][m]) * dw / M_PI);
    }
  }

  RVec draw_a(nch), draw_b(nch);
  RMat beta_half = RMat::Zero(half_steps + 1, nch);
  const double hdt = 0.5 * grid.dt;
  for (int m = 0; m < modes; ++m) {
    for (int ch = 0; ch < nch; ++ch) draw_a[ch] = rng.next_normal();
    for (int ch = 0; ch < nch; ++ch) draw_b[ch] = rng.next_normal();
    const RVec ca = lmat * draw_a;
    const RVec cb = lmat * draw_b;
    for (int ch = 0; ch < nch; ++ch) {
      const double w = omega[ch][m];
      const double s_amp = amp[ch][m];
      if (s_amp == 0.0) continue;
      const double pa = s_amp * ca[ch];
      const double pb = s_amp * cb[ch];
      // rotate (cos, sin) by w*hdt per half-step
      const double cd = std::cos(w * hdt), sd = std::sin(w * hdt);
      double c = 1.0, s = 0.0;
      for (int j = 0; j <= half_steps; ++j) {
        beta_half(j, ch) += pa * c + pb * s;
        const double cn = c * cd - s * sd;
        s = s * cd + c * sd;
        c = cn;
      }
    }
  }
  for (int k = 0; k <= grid.steps; ++k) traj.nodes.row(k) = beta_half.row(2 * k);
  for (int k = 0; k < grid.steps; ++k) traj.midpoints.row(k) = beta_half.row(2 * k + 1);
  return traj;
}

EmpiricalPsd empirical_psd(const NoiseModel& model, const TimeGrid& grid,
                           int64_t trajectories, uint64_t master_seed, int modes,
                           int workers) {
  if (trajectories < 100)
    throw ConfigError("empirical_psd: at least 100 trajectories required");
  const int nch = model.channel_count();
  const double t_total = grid.duration();
  // frequencies above the PSD band carry no signal; cap the grid there
  double band_hi = 0.0;
  for (const auto& ch : model.channels) band_hi = std::max(band_hi, ch.psd.support_max());
  const int n_freq = std::min(grid.steps / 2,
                              static_cast<int>(std::ceil(1.2 * band_hi * t_total / (2.0 * M_PI))));
  if (n_freq < 3) throw ConfigError("empirical_psd: window too short for the PSD band");

  EmpiricalPsd out;
  for (int f = 1; f <= n_freq; ++f) out.omega.push_back(2.0 * M_PI * f / t_total);

  struct Partial {
    std::vector<RMat> acc;
  };
  auto make = [&] {
    Partial p;
    p.acc.assign(n_freq, RMat::Zero(nch, nch));
    return p;
  };
  auto body = [&](Partial& p, int64_t idx) {
    const Trajectory traj =
        sample_trajectory(model, grid, derive_seed(master_seed, idx), modes);
    // DFT over the K node samples t_k, k = 0..K-1
    Eigen::MatrixXcd x(n_freq, nch);
    for (int f = 0; f < n_freq; ++f) {
      const double w = out.omega[f];
      const Complex rot = std::exp(Complex(0, -w * grid.dt));
      Complex phase = 1.0;
      Eigen::RowVectorXcd s = Eigen::RowVectorXcd::Zero(nch);
      for (int k = 0; k < grid.steps; ++k) {
        s += phase * traj.nodes.row(k);
        phase *= rot;
      }
      x.row(f) = s * grid.dt;
    }
    for (int f = 0; f < n_freq; ++f)
      p.acc[f] += (x.row(f).adjoint() * x.row(f)).real() / t_total;
  };
  auto fold = [&](Partial& tot, const Partial& p) {
    for (int f = 0; f < n_freq; ++f) tot.acc[f] += p.acc[f];
  };

  Partial total = parallel_chunked<Partial>(trajectories, 64, resolve_workers(workers),
                                            make, body, fold);
  for (int f = 0; f < n_freq; ++f)
    out.spectra.push_back(total.acc[f] / double(trajectories));
  return out;
}

double psd_loglog_slope(const EmpiricalPsd& psd, int channel, double w_lo, double w_hi) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (size_t f = 0; f < psd.omega.size(); ++f) {
    const double w = psd.omega[f];
    const double s = psd.spectra[f](channel, channel);
    if (w < w_lo || w > w_hi || s <= 0) continue;
    const double x = std::log(w), y = std::log(s);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
    ++n;
  }
  if (n < 3) throw ConfigError("psd_loglog_slope: not enough frequencies in band");
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace symnoise
