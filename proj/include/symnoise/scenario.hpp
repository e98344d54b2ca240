#pragma once

#include <symnoise/fff.hpp>
#include <symnoise/heatmap.hpp>
#include <symnoise/tfim.hpp>

#include <nlohmann/json.hpp>

#include <string>

// Scenario driver: wires the TFIM + J^2 + dephasing pipelines (Monte Carlo
// and FFF), computes the report metrics, and writes figure data.

namespace symnoise {

using ojson = nlohmann::ordered_json;

struct ScenarioConfig {
  std::string name = "custom";  // figure2a|figure2b|figure3a|figure3b|custom
  enum class Mode { Full, MonteCarloOnly, FffOnly } mode = Mode::Full;
  int n = 3;
  TfimConfig tfim;
  DephasingKind dephasing = DephasingKind::Global;
  PsdSpec psd = PsdSpec::pink(1.0, 0.1, 20.0);
  // if > 0 and the PSD is pink, rescale the amplitude so max_omega S * T
  // equals this at the scenario duration
  double s0_t_product = 0.1;

  enum class DurationMode { MultipleOfTau, Absolute } duration_mode = DurationMode::MultipleOfTau;
  double duration_factor = 2.0;
  double duration_absolute = 0.0;
  std::optional<double> dt_override;
  int min_steps = 200;

  int64_t trajectories = 20000;
  uint64_t master_seed = 42;
  int workers = 0;
  bool fast = false;      // trajectory preset 2000 for quick runs
  bool mc_long = false;   // figure-3: run the honest long-time ensemble
  double mc_long_factor = 50.0;      // T = factor * tau
  double mc_long_s0_t_product = 1.0; // amplitude for the long run, at T = 2 tau
  bool log_scale_heatmap = false;
  bool antithetic = false;  // antithetic trajectory pairing in the ensembles
  int synth_modes = 512;
  int freq_points = 800;  // frequency grid for filter functions / bounds
  std::string initial_state = "plus";

  bool is_figure3() const { return name == "figure3a" || name == "figure3b"; }

  static ScenarioConfig preset(const std::string& name);
  static ScenarioConfig from_json(const ojson& j);
  ojson to_json() const;
};

struct ScenarioReport {
  ScenarioConfig config;
  // provenance
  double tau = 0.0, t_final = 0.0, dt = 0.0, s0 = 0.0;
  int steps = 0;
  int sps_sector = -1;
  std::vector<double> sector_eigenvalues;
  std::vector<int> sector_multiplicities;
  std::vector<std::string> warnings;
  bool has_mc = false;
  bool has_fff = false;

  CMat rho_mc;          // noise-averaged state at T (empty for pure fig-3 extrapolation)
  CMat rho_fff;         // exp(C)[rho_0(T)]
  CMat rho_long;        // figure-3 state (extrapolated or mc-long)
  SectorSpectrum spectrum;

  double statistical_floor = 0.0;
  double integrator_floor = 0.0;  // off-SPS population of the ideal state
  // block metrics (MC / FFF)
  double mc_off_sps_population = 0.0, fff_off_sps_population = 0.0;
  double mc_offblock_max = 0.0, fff_offblock_max = 0.0;
  std::vector<double> mc_populations, fff_populations, ideal_populations;
  double fff_mc_trace_distance = 0.0;

  // time series: checkpoint time, then per-sector MC populations
  std::vector<double> checkpoint_times;
  std::vector<std::vector<double>> population_series;

  StructureReport structure;
  SpectrumReport spectrum_report;
  BoundReport bounds;
  SteadyStateReport steady;  // figure-3 only (valid when is_figure3)
  bool has_steady = false;
  double steady_distance_predicted = 0.0;  // |rho_long - predicted|_1 / 2

  ojson to_json() const;
};

ScenarioReport run_scenario(const ScenarioConfig& config);

// report.json + heatmap CSV/SVG files under out_dir
void write_scenario_files(const ScenarioReport& report, const std::string& out_dir);

// re-render heatmaps from a previously written report.json
void render_from_report(const std::string& report_path, const std::string& out_dir,
                        bool log_scale);

}  // namespace symnoise
