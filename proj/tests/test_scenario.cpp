#include <doctest.h>

#include <symnoise/scenario.hpp>

#include <filesystem>
#include <fstream>

using namespace symnoise;
namespace fs = std::filesystem;

namespace {

ScenarioConfig quick_config(const std::string& preset, int n, int64_t m) {
  ScenarioConfig cfg = ScenarioConfig::preset(preset);
  cfg.n = n;
  cfg.trajectories = m;
  cfg.min_steps = 100;
  cfg.master_seed = 99;
  cfg.freq_points = 200;
  return cfg;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  REQUIRE(f.good());
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

}  // namespace

TEST_SUITE_BEGIN("scenario");

TEST_CASE("config json round trip") {
  ScenarioConfig cfg = ScenarioConfig::preset("figure2b");
  cfg.n = 4;
  cfg.trajectories = 123;
  cfg.master_seed = 7;
  cfg.dt_override = 0.01;
  cfg.psd = PsdSpec::pink(0.5, 0.2, 15.0);
  const ScenarioConfig back = ScenarioConfig::from_json(cfg.to_json());
  CHECK(back.name == "figure2b");
  CHECK(back.n == 4);
  CHECK(back.trajectories == 123);
  CHECK(back.master_seed == 7);
  CHECK(back.dephasing == DephasingKind::Local);
  CHECK(back.psd.amplitude == doctest::Approx(0.5));
  CHECK(back.psd.omega_ir == doctest::Approx(0.2));
  CHECK(*back.dt_override == doctest::Approx(0.01));

  CHECK_THROWS_AS((void)ScenarioConfig::preset("figure9z"), ConfigError);
}

TEST_CASE("tfim builders") {
  // complete-graph couplings commute with J^2 for n = 2, 3, 4
  for (int n : {2, 3, 4}) {
    TfimConfig cfg;
    cfg.n = n;
    const CMat h0 = build_tfim_hamiltonian(cfg);
    const CMat q = build_j_squared(n);
    CHECK(max_abs(commutator(q, h0)) < 1e-10 * max_abs(h0));
  }
  // explicit n=2 matrix: J (sz x sz) + h (sx x 1 + 1 x sx)
  {
    TfimConfig cfg;
    cfg.n = 2;
    cfg.j = 0.7;
    cfg.h = 1.3;
    const CMat h0 = build_tfim_hamiltonian(cfg);
    const CMat ref = 0.7 * pauli_on(2, 0, pauli_z()) * pauli_on(2, 1, pauli_z()) +
                     1.3 * (pauli_on(2, 0, pauli_x()) + pauli_on(2, 1, pauli_x()));
    CHECK(max_abs(CMat(h0 - ref)) < 1e-14);
  }
  // h = 0: diagonal in the computational basis
  {
    TfimConfig cfg;
    cfg.n = 3;
    cfg.h = 0.0;
    const CMat h0 = build_tfim_hamiltonian(cfg);
    CMat off = h0;
    off.diagonal().setZero();
    CHECK(max_abs(off) == 0.0);
  }
  // guard on large n
  {
    TfimConfig cfg;
    cfg.n = 7;
    CHECK_THROWS_AS((void)build_tfim_hamiltonian(cfg), ConfigError);
    cfg.allow_large = true;
    CHECK_NOTHROW((void)build_j_squared(7));
  }
}

TEST_CASE("dephasing builders classify as expected") {
  const auto basis = build_qbasis(sector_decompose(build_j_squared(2)));
  const PsdSpec psd = PsdSpec::pink(1.0, 0.1, 20.0);

  const NoiseModel global = build_dephasing(2, DephasingKind::Global, psd);
  const NoiseModel eff = global.decorrelate();
  REQUIRE(eff.channel_count() == 1);
  CHECK(classify_operator(eff.channels[0].op, basis).symmetry_preserving);

  const NoiseModel local = build_dephasing(2, DephasingKind::Local, psd);
  CHECK(local.decorrelate().channel_count() == 2);
  for (const auto& ch : local.channels)
    CHECK(!classify_operator(ch.op, basis).symmetry_preserving);

  // identical seeds on a fully correlated model give equal channel samples
  const Trajectory t = sample_trajectory(global, TimeGrid{0.05, 40}, 4);
  CHECK((t.nodes.col(0) - t.nodes.col(1)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("figure2a quick run: reportable structure") {
  ScenarioConfig cfg = quick_config("figure2a", 2, 400);
  const ScenarioReport rep = run_scenario(cfg);

  CHECK(rep.sps_sector == 1);
  CHECK(rep.tau > 0.5);
  CHECK(rep.t_final == doctest::Approx(2.0 * rep.tau));
  // preserving noise: leakage at the integrator floor, FFF side at 1e-9
  CHECK(rep.mc_off_sps_population < 1e-9);
  CHECK(rep.fff_off_sps_population < 1e-9);
  CHECK(rep.structure.pass);
  CHECK(rep.bounds.measured_distance <= rep.bounds.eq9_total);
  CHECK(rep.bounds.eq9_total <= rep.bounds.eq10_white);
  CHECK(rep.fff_mc_trace_distance < 10.0 * rep.statistical_floor);
  // population series: each checkpoint sums to one
  for (const auto& pops : rep.population_series) {
    double sum = 0.0;
    for (double p : pops) sum += p;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  }

  // json report carries the required fields
  const ojson j = rep.to_json();
  CHECK(j.at("metrics").contains("fff_mc_trace_distance"));
  CHECK(j.at("bounds").contains("eq9_total"));
  CHECK(j.at("bounds").contains("eq10_white"));
  CHECK(j.at("provenance").at("master_seed").get<uint64_t>() == 99);
}

TEST_CASE("scenario outputs are byte-identical across worker counts") {
  auto run_with_workers = [&](int w) {
    ScenarioConfig cfg = quick_config("figure2b", 2, 300);
    cfg.workers = w;
    const ScenarioReport rep = run_scenario(cfg);
    const fs::path dir = fs::temp_directory_path() / ("symnoise_w" + std::to_string(w));
    fs::remove_all(dir);
    write_scenario_files(rep, dir.string());
    return dir;
  };
  const fs::path d1 = run_with_workers(1);
  const fs::path d2 = run_with_workers(2);
  const fs::path d8 = run_with_workers(8);
  for (const char* name : {"report.json", "heatmap_mc.csv", "heatmap_fff.csv",
                           "populations.csv", "heatmap_mc.svg"}) {
    const std::string a = slurp(d1 / name);
    CHECK(a == slurp(d2 / name));
    CHECK(a == slurp(d8 / name));
    CHECK(!a.empty());
  }
  // worker count must not appear in the config echo for this to hold; it is
  // an execution knob, not part of the experiment identity
  const ojson j = ojson::parse(slurp(d1 / "report.json"));
  CHECK(!j.at("config").contains("workers"));
}

TEST_CASE("heatmap csv round trip and svg determinism") {
  ScenarioConfig cfg = quick_config("figure2a", 2, 50);
  const ScenarioReport rep = run_scenario(cfg);
  const std::string csv = heatmap_csv(rep.rho_mc, rep.spectrum);
  const CMat mags = heatmap_csv_parse(csv);
  const CMat direct =
      rep.spectrum.transform.adjoint() * rep.rho_mc * rep.spectrum.transform;
  CHECK((mags.real() - direct.cwiseAbs()).cwiseAbs().maxCoeff() < 1e-11);

  const std::string svg1 = heatmap_svg(rep.rho_mc, rep.spectrum);
  const std::string svg2 = heatmap_svg(rep.rho_mc, rep.spectrum);
  CHECK(svg1 == svg2);
  CHECK(svg1.find("<svg") != std::string::npos);
  CHECK(svg1.find("q=") != std::string::npos);

  // maximally mixed SPS block renders a uniform block
  CMat mixed = CMat::Zero(4, 4);
  for (int a = 0; a < 3; ++a) {
    const CVec v = rep.spectrum.transform.col(rep.spectrum.offset(1) + a);
    mixed += v * v.adjoint() / 3.0;
  }
  const CMat mm = heatmap_csv_parse(heatmap_csv(mixed, rep.spectrum));
  for (int a = 1; a < 4; ++a) CHECK(std::abs(mm(a, a).real() - 1.0 / 3.0) < 1e-10);
  CHECK(std::abs(mm(0, 0).real()) < 1e-12);
}

TEST_CASE("render from report") {
  ScenarioConfig cfg = quick_config("figure2a", 2, 50);
  const ScenarioReport rep = run_scenario(cfg);
  const fs::path dir = fs::temp_directory_path() / "symnoise_render";
  fs::remove_all(dir);
  write_scenario_files(rep, dir.string());
  render_from_report((dir / "report.json").string(), (dir / "re").string(), true);
  CHECK(fs::exists(dir / "re" / "render_mc_abs.svg"));
  CHECK(fs::exists(dir / "re" / "render_fff_abs.csv"));
}

TEST_CASE("figure3 extrapolation mode") {
  ScenarioConfig cfg = quick_config("figure3a", 2, 200);
  const ScenarioReport rep = run_scenario(cfg);
  REQUIRE(rep.has_steady);
  // extrapolated steady state near the maximally mixed SPS state
  CHECK(rep.steady.distance < 0.05);
  CHECK(rep.steady_distance_predicted < 0.05);
  const ojson j = rep.to_json();
  CHECK(j.contains("steady_state"));
  CHECK(j.at("states").contains("long_abs"));
}

TEST_CASE("mc-only and fff-only modes") {
  ScenarioConfig cfg = quick_config("figure2a", 2, 100);
  cfg.mode = ScenarioConfig::Mode::MonteCarloOnly;
  const ScenarioReport mc = run_scenario(cfg);
  CHECK(mc.has_mc);
  CHECK(!mc.has_fff);
  CHECK(!mc.to_json().at("states").contains("fff_abs"));

  cfg.mode = ScenarioConfig::Mode::FffOnly;
  const ScenarioReport ff = run_scenario(cfg);
  CHECK(!ff.has_mc);
  CHECK(ff.has_fff);
  CHECK(ff.to_json().at("states").contains("fff_abs"));
}

TEST_SUITE_END();
