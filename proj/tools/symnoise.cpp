#include <symnoise/scenario.hpp>

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

// symnoise: symmetry-adapted filter-function analysis and Monte Carlo
// simulation of noisy spin dynamics.
//
// exit codes: 0 success, 1 configuration error, 2 invariant violation

namespace {

using namespace symnoise;
namespace fs = std::filesystem;

ojson load_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open " + path);
  return ojson::parse(f);
}

ScenarioConfig config_from_options(const std::string& preset, const std::string& config_path) {
  ScenarioConfig cfg = ScenarioConfig::preset(preset);
  if (!config_path.empty()) {
    ojson j = load_json(config_path);
    if (!j.contains("name")) j["name"] = preset;
    cfg = ScenarioConfig::from_json(j);
  }
  return cfg;
}

void print_scenario_summary(const ScenarioReport& rep) {
  std::cout << "scenario " << rep.config.name << ": n=" << rep.config.n
            << " T=" << rep.t_final << " (tau=" << rep.tau << ") steps=" << rep.steps
            << " M=" << rep.config.trajectories << "\n";
  std::cout << "  off-SPS population: MC " << rep.mc_off_sps_population << ", FFF "
            << rep.fff_off_sps_population << " (floor " << rep.statistical_floor << ")\n";
  std::cout << "  cross-sector block max: MC " << rep.mc_offblock_max << ", FFF "
            << rep.fff_offblock_max << "\n";
  std::cout << "  FFF vs MC trace distance: " << rep.fff_mc_trace_distance << "\n";
  std::cout << "  D=" << rep.bounds.measured_distance << " <= Eq9 " << rep.bounds.eq9_total
            << " <= Eq10 " << rep.bounds.eq10_white << "\n";
  if (rep.has_steady)
    std::cout << "  steady-state distance: extrapolated " << rep.steady.distance
              << ", long-state " << rep.steady_distance_predicted << "\n";
  for (const auto& w : rep.warnings) std::cout << "  warning: " << w << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"symmetry-adapted noise analysis for driven spin systems"};
  app.require_subcommand(1);

  // ---- basis ----
  auto* basis_cmd = app.add_subcommand("basis", "build the J^2-adapted su(N) basis");
  int basis_n = 2;
  std::string basis_out = "basis.json";
  std::string basis_qfile;
  basis_cmd->add_option("--n", basis_n, "qubit count");
  basis_cmd->add_option("--out", basis_out, "output JSON path");
  basis_cmd->add_option("--qfile", basis_qfile,
                        "JSON file with a Hermitian operator Q (entries [re,im]) "
                        "to use instead of J^2");

  // ---- noise-check ----
  auto* noise_cmd = app.add_subcommand("noise-check", "synthesize noise and verify its PSD");
  std::string noise_config;
  int64_t noise_traj = 10000;
  uint64_t noise_seed = 42;
  int noise_workers = 0;
  noise_cmd->add_option("--config", noise_config, "scenario config JSON (psd section used)");
  noise_cmd->add_option("--trajectories", noise_traj, "ensemble size");
  noise_cmd->add_option("--seed", noise_seed, "master seed");
  noise_cmd->add_option("--workers", noise_workers, "worker threads (0 = auto)");

  // ---- scenario / simulate / fff ----
  std::string preset = "custom", config_path, out_dir = "out";
  int opt_n = -1;
  int64_t opt_traj = -1;
  int64_t opt_seed = -1;
  int opt_workers = 0;
  bool opt_fast = false, opt_mc_long = false, opt_log = false;
  auto add_common = [&](CLI::App* cmd, bool with_preset) {
    if (with_preset)
      cmd->add_option("preset", preset, "figure2a|figure2b|figure3a|figure3b|custom");
    cmd->add_option("--config", config_path, "config JSON file");
    cmd->add_option("--n", opt_n, "qubit count override");
    cmd->add_option("--trajectories,-M", opt_traj, "trajectory count override");
    cmd->add_option("--seed", opt_seed, "master seed override");
    cmd->add_option("--workers", opt_workers, "worker threads (0 = auto)");
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_flag("--fast", opt_fast, "quick preset (M=2000)");
    cmd->add_flag("--mc-long", opt_mc_long, "figure-3: honest long-time ensemble");
    cmd->add_flag("--log", opt_log, "log color scale for heatmaps");
  };
  auto* scen_cmd = app.add_subcommand("scenario", "full Monte Carlo + FFF pipeline");
  add_common(scen_cmd, true);
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo ensemble only");
  add_common(sim_cmd, true);
  auto* fff_cmd = app.add_subcommand("fff", "filter-function pipeline only");
  add_common(fff_cmd, true);

  // ---- render ----
  auto* render_cmd = app.add_subcommand("render", "re-render heatmaps from a report");
  std::string render_in = "report.json", render_out = "out";
  bool render_log = false;
  render_cmd->add_option("--in", render_in, "report.json path");
  render_cmd->add_option("--out", render_out, "output directory");
  render_cmd->add_flag("--log", render_log, "log color scale");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*basis_cmd) {
      CMat q;
      if (basis_qfile.empty()) {
        q = build_j_squared(basis_n);
      } else {
        ojson j = load_json(basis_qfile);
        const auto rows = j.get<std::vector<std::vector<std::vector<double>>>>();
        q.resize(rows.size(), rows.size());
        for (size_t a = 0; a < rows.size(); ++a)
          for (size_t b = 0; b < rows.size(); ++b)
            q(a, b) = Complex(rows.at(a).at(b).at(0), rows.at(a).at(b).at(1));
      }
      const QBasis basis = build_qbasis(sector_decompose(q));
      std::ofstream f(basis_out);
      f << qbasis_to_json(basis) << "\n";
      const auto dims = centralizer_dims(basis);
      std::cout << "wrote " << basis_out << ": dim " << basis.dim() << ", "
                << basis.size() << " generators, N_Q = " << dims.n_centralizer << "\n";
      for (const auto& w : basis.spectrum.warnings) std::cout << "warning: " << w << "\n";
      return 0;
    }

    if (*noise_cmd) {
      ScenarioConfig cfg;
      if (!noise_config.empty()) cfg = ScenarioConfig::from_json(load_json(noise_config));
      const PsdSpec psd = cfg.psd;
      const double tau = correlation_length(psd);
      // resolution support_min/2, and several synthesis tones per periodogram
      // bin so the estimate tracks the smooth model pointwise
      const double t_total = 4.0 * M_PI / psd.support_min();
      const double dt = 0.5 * M_PI / psd.support_max();
      const int steps = std::min(20000, static_cast<int>(t_total / dt));
      TimeGrid grid{t_total / steps, steps};
      const double domega = 2.0 * M_PI / grid.duration();
      const int modes = std::max(
          cfg.synth_modes,
          static_cast<int>(5.0 * (psd.support_max() - psd.support_min()) / domega));
      NoiseModel model;
      model.channels.push_back({CMat::Zero(2, 2), psd});
      model.channels[0].op = pauli_z();
      model.cross_correlation = NoiseModel::independent(1);
      const EmpiricalPsd emp =
          empirical_psd(model, grid, noise_traj, noise_seed, modes, noise_workers);
      std::cout << "tau = " << tau << ", C(0) = " << autocorrelation(psd, 0.0) << "\n";
      if (psd.kind == PsdSpec::Kind::Pink) {
        const double slope =
            psd_loglog_slope(emp, 0, 3.0 * psd.omega_ir, psd.omega_uv / 3.0);
        std::cout << "pink log-log slope over the central band: " << slope << "\n";
      }
      std::cout << "omega,S_hat,S_model\n";
      for (size_t f = 0; f < emp.omega.size(); f += std::max<size_t>(1, emp.omega.size() / 40))
        std::cout << emp.omega[f] << "," << emp.spectra[f](0, 0) << ","
                  << psd.value(emp.omega[f]) << "\n";
      return 0;
    }

    if (*render_cmd) {
      render_from_report(render_in, render_out, render_log);
      std::cout << "rendered heatmaps into " << render_out << "\n";
      return 0;
    }

    // scenario-style commands
    ScenarioConfig cfg = config_from_options(preset, config_path);
    if (opt_n > 0) cfg.n = opt_n;
    if (opt_traj > 0) cfg.trajectories = opt_traj;
    if (opt_seed >= 0) cfg.master_seed = static_cast<uint64_t>(opt_seed);
    cfg.workers = opt_workers;
    cfg.fast = cfg.fast || opt_fast;
    cfg.mc_long = cfg.mc_long || opt_mc_long;
    cfg.log_scale_heatmap = cfg.log_scale_heatmap || opt_log;
    if (*sim_cmd) cfg.mode = ScenarioConfig::Mode::MonteCarloOnly;
    if (*fff_cmd) cfg.mode = ScenarioConfig::Mode::FffOnly;

    const ScenarioReport rep = run_scenario(cfg);
    write_scenario_files(rep, out_dir);
    print_scenario_summary(rep);
    std::cout << "wrote " << (fs::path(out_dir) / "report.json").string() << "\n";
    if (rep.has_fff && !rep.structure.pass) {
      std::cerr << "structure check failed:\n";
      for (const auto& o : rep.structure.offending) std::cerr << "  " << o << "\n";
      return 2;
    }
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const InvariantError& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
