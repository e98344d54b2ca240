#include <doctest.h>

#include <symnoise/matrix_ops.hpp>
#include <symnoise/noise.hpp>
#include <symnoise/rng.hpp>

#include <cmath>

using namespace symnoise;

namespace {

NoiseModel single_channel(const PsdSpec& psd) {
  NoiseModel m;
  m.channels.push_back({pauli_z(), psd});
  m.cross_correlation = NoiseModel::independent(1);
  return m;
}

}  // namespace

TEST_SUITE_BEGIN("noise");

TEST_CASE("autocorrelation closed forms") {
  // band-limited white: C(0) = S0 w_uv / pi, C(t) = S0 sin(w_uv t)/(pi t)
  const PsdSpec white = PsdSpec::white(2.0, 5.0);
  CHECK(autocorrelation(white, 0.0) == doctest::Approx(2.0 * 5.0 / M_PI).epsilon(1e-6));
  const double t = 0.7;
  CHECK(autocorrelation(white, t) ==
        doctest::Approx(2.0 * std::sin(5.0 * t) / (M_PI * t)).epsilon(1e-6));

  // lorentzian: C(t) -> S0 exp(-|t|/tau_c) for a wide band
  const PsdSpec lor = PsdSpec::lorentzian(1.3, 0.5);
  for (double tt : {0.0, 0.2, 0.5, 1.0}) {
    const double expect = 1.3 * std::exp(-tt / 0.5);
    CHECK(std::abs(autocorrelation(lor, tt) - expect) < 0.02 * 1.3);
  }

  CHECK_THROWS_AS((void)autocorrelation(PsdSpec::white(1.0), 0.0), ConfigError);
}

TEST_CASE("correlation_length") {
  CHECK(correlation_length(PsdSpec::lorentzian(1.0, 0.5)) ==
        doctest::Approx(0.5).epsilon(0.02));
  CHECK(correlation_length(PsdSpec::lorentzian(3.0, 2.0)) ==
        doctest::Approx(2.0).epsilon(0.02));

  const double tau = correlation_length(PsdSpec::pink(1.0, 0.1, 20.0));
  CHECK(tau > 1.0 / 20.0);
  CHECK(tau < 1.0 / 0.1);
  // doubling both cutoffs halves tau
  const double tau2 = correlation_length(PsdSpec::pink(1.0, 0.2, 40.0));
  CHECK(tau2 == doctest::Approx(0.5 * tau).epsilon(0.01));
}

TEST_CASE("trajectories are reproducible and zero mean") {
  const PsdSpec psd = PsdSpec::pink(0.5, 0.1, 20.0);
  const NoiseModel model = single_channel(psd);
  TimeGrid grid{0.05, 100};

  const Trajectory a = sample_trajectory(model, grid, 1234);
  const Trajectory b = sample_trajectory(model, grid, 1234);
  CHECK((a.nodes - b.nodes).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.midpoints - b.midpoints).cwiseAbs().maxCoeff() == 0.0);
  const Trajectory c = sample_trajectory(model, grid, 1235);
  CHECK((a.nodes - c.nodes).cwiseAbs().maxCoeff() > 0.0);

  // ensemble mean at fixed t over many seeds stays within 3 sigma
  const int m = 10000;
  double sum = 0.0;
  for (int k = 0; k < m; ++k)
    sum += sample_trajectory(model, TimeGrid{0.05, 2}, derive_seed(77, k)).nodes(1, 0);
  const double c0 = autocorrelation(psd, 0.0);
  CHECK(std::abs(sum / m) < 3.0 * std::sqrt(c0 / m));
}

TEST_CASE("nyquist precondition") {
  const NoiseModel model = single_channel(PsdSpec::pink(1.0, 0.1, 20.0));
  CHECK_THROWS_AS((void)sample_trajectory(model, TimeGrid{0.2, 10}, 1), ConfigError);
  CHECK_THROWS_AS((void)sample_trajectory(model, TimeGrid{0.05, 1}, 1), ConfigError);
}

TEST_CASE("synthesized variance matches C(0) within 2 percent") {
  const PsdSpec psd = PsdSpec::pink(0.8, 0.1, 20.0);
  const NoiseModel model = single_channel(psd);
  TimeGrid grid{0.1, 100};
  double sq = 0.0;
  int64_t count = 0;
  for (int k = 0; k < 1000; ++k) {
    const Trajectory t = sample_trajectory(model, grid, derive_seed(5, k));
    sq += t.nodes.col(0).squaredNorm();
    count += t.nodes.rows();
  }
  const double var = sq / double(count);
  CHECK(var == doctest::Approx(autocorrelation(psd, 0.0)).epsilon(0.02));
}

TEST_CASE("lorentzian sample autocovariance decays exponentially") {
  const double s0 = 1.0, tau_c = 0.8;
  const PsdSpec psd = PsdSpec::lorentzian(s0, tau_c);
  const NoiseModel model = single_channel(psd);
  const double dt = 0.03;  // nyquist: pi / (64/0.8) = 0.039
  const int lag1 = static_cast<int>(tau_c / dt);
  TimeGrid grid{dt, 3 * lag1 + 1};
  RVec acc = RVec::Zero(4);
  const int m = 10000;
  for (int k = 0; k < m; ++k) {
    const Trajectory t = sample_trajectory(model, grid, derive_seed(21, k));
    const double b0 = t.nodes(0, 0);
    acc[0] += b0 * b0;
    for (int l = 1; l <= 3; ++l) acc[l] += b0 * t.nodes(l * lag1, 0);
  }
  acc /= double(m);
  for (int l = 0; l <= 3; ++l) {
    const double expect = s0 * std::exp(-(l * lag1 * dt) / tau_c);
    CHECK(std::abs(acc[l] - expect) < 0.05 * s0);
  }
}

TEST_CASE("stationarity and gaussianity") {
  const PsdSpec psd = PsdSpec::pink(0.5, 0.2, 10.0);
  const NoiseModel model = single_channel(psd);
  TimeGrid grid{0.1, 60};
  const int m = 10000;
  const int s = 13;  // lag in grid steps
  RVec cov = RVec::Zero(3);
  double m2 = 0.0, m4 = 0.0;
  int64_t count = 0;
  for (int k = 0; k < m; ++k) {
    const Trajectory t = sample_trajectory(model, grid, derive_seed(31, k));
    for (int a = 0; a < 3; ++a) {
      const int anchor = a * 20;
      cov[a] += t.nodes(anchor, 0) * t.nodes(anchor + s, 0);
    }
    for (int j = 0; j < t.nodes.rows(); j += 6) {
      const double v = t.nodes(j, 0);
      m2 += v * v;
      m4 += v * v * v * v;
      ++count;
    }
  }
  cov /= double(m);
  const double c0 = autocorrelation(psd, 0.0);
  // covariance at the same lag from three anchor times agrees within 3 sigma
  for (int a = 0; a < 3; ++a)
    for (int b = a + 1; b < 3; ++b)
      CHECK(std::abs(cov[a] - cov[b]) < 3.0 * 2.0 * c0 / std::sqrt(double(m)));
  const double kurt = (m4 / count) / ((m2 / count) * (m2 / count));
  CHECK(std::abs(kurt - 3.0) < 0.1);
}

TEST_CASE("global correlation gives identical channels") {
  NoiseModel model;
  const PsdSpec psd = PsdSpec::pink(0.5, 0.1, 20.0);
  for (int i = 0; i < 3; ++i) model.channels.push_back({pauli_z(), psd});
  model.cross_correlation = NoiseModel::fully_correlated(3);
  const Trajectory t = sample_trajectory(model, TimeGrid{0.05, 50}, 99);
  CHECK((t.nodes.col(0) - t.nodes.col(1)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((t.nodes.col(0) - t.nodes.col(2)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("cross correlation matrix validation") {
  NoiseModel model;
  model.channels.push_back({pauli_z(), PsdSpec::white(1.0, 5.0)});
  model.channels.push_back({pauli_x(), PsdSpec::white(1.0, 5.0)});
  model.cross_correlation = RMat::Zero(2, 2);
  model.cross_correlation << 1.0, 2.0, 2.0, 1.0;  // not PSD
  CHECK_THROWS_AS(model.validate(), ConfigError);
  model.cross_correlation << 1.0, 0.5, 0.5, 1.0;
  CHECK_NOTHROW(model.validate());
}

TEST_CASE("empirical psd: pink slope and cross spectra") {
  // long window so the periodogram resolves the band
  const PsdSpec psd = PsdSpec::pink(1.0, 0.5, 40.0);
  NoiseModel model;
  model.channels.push_back({pauli_z(), psd});
  model.channels.push_back({pauli_z(), psd});
  model.cross_correlation = NoiseModel::independent(2);
  TimeGrid grid{0.05, 1200};
  const EmpiricalPsd emp = empirical_psd(model, grid, 2000, 4242, 512);
  const double slope = psd_loglog_slope(emp, 0, 3.0 * 0.5, 40.0 / 3.0);
  CHECK(slope == doctest::Approx(-1.0).epsilon(0.1));

  // independent channels: cross spectrum at the statistical floor
  double cross = 0.0, diag = 0.0;
  for (size_t f = 0; f < emp.omega.size(); ++f) {
    if (emp.omega[f] < 1.5 || emp.omega[f] > 13.0) continue;
    cross = std::max(cross, std::abs(emp.spectra[f](0, 1)));
    diag = std::max(diag, emp.spectra[f](0, 0));
  }
  CHECK(cross < 5.0 * diag / std::sqrt(2000.0));

  // flat input stays flat within 10 percent
  NoiseModel flat;
  flat.channels.push_back({pauli_z(), PsdSpec::white(1.0, 30.0)});
  flat.cross_correlation = NoiseModel::independent(1);
  const EmpiricalPsd empf = empirical_psd(flat, grid, 2000, 777, 512);
  for (size_t f = 0; f < empf.omega.size(); ++f) {
    if (empf.omega[f] < 2.0 || empf.omega[f] > 25.0) continue;
    CHECK(empf.spectra[f](0, 0) == doctest::Approx(1.0).epsilon(0.10));
  }
}

TEST_CASE("empirical psd determinism across worker counts") {
  const PsdSpec psd = PsdSpec::pink(1.0, 0.5, 20.0);
  NoiseModel model = single_channel(psd);
  TimeGrid grid{0.1, 200};
  const EmpiricalPsd a = empirical_psd(model, grid, 256, 11, 256, 1);
  const EmpiricalPsd b = empirical_psd(model, grid, 256, 11, 256, 2);
  const EmpiricalPsd c = empirical_psd(model, grid, 256, 11, 256, 8);
  for (size_t f = 0; f < a.omega.size(); ++f) {
    CHECK((a.spectra[f] - b.spectra[f]).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.spectra[f] - c.spectra[f]).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_SUITE_END();
