#include <symnoise/scenario.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>

namespace symnoise {

namespace fs = std::filesystem;

ScenarioConfig ScenarioConfig::preset(const std::string& name) {
  ScenarioConfig c;
  c.name = name;
  if (name == "figure2a") {
    c.dephasing = DephasingKind::Global;
    c.s0_t_product = 0.1;
  } else if (name == "figure2b") {
    c.dephasing = DephasingKind::Local;
    // total off-SPS leakage must clear 5x the 1/sqrt(M) floor at M = 20000
    c.s0_t_product = 0.6;
  } else if (name == "figure3a") {
    c.dephasing = DephasingKind::Global;
    c.s0_t_product = 0.1;
  } else if (name == "figure3b") {
    c.dephasing = DephasingKind::Local;
    c.s0_t_product = 0.1;
  } else if (name == "custom") {
    // leave defaults
  } else {
    throw ConfigError("unknown scenario preset: " + name);
  }
  return c;
}

namespace {

PsdSpec psd_from_json(const ojson& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "pink")
    return PsdSpec::pink(j.value("amplitude", 1.0), j.at("omega_ir").get<double>(),
                         j.at("omega_uv").get<double>());
  if (kind == "white")
    return PsdSpec::white(j.at("s0").get<double>(), j.value("omega_max", 0.0));
  if (kind == "lorentzian")
    return PsdSpec::lorentzian(j.at("s0").get<double>(), j.at("tau_c").get<double>());
  if (kind == "tabulated")
    return PsdSpec::tabulated(j.at("omega").get<std::vector<double>>(),
                              j.at("s").get<std::vector<double>>());
  throw ConfigError("unknown psd kind: " + kind);
}

ojson psd_to_json(const PsdSpec& p) {
  ojson j;
  switch (p.kind) {
    case PsdSpec::Kind::Pink:
      j["kind"] = "pink";
      j["amplitude"] = p.amplitude;
      j["omega_ir"] = p.omega_ir;
      j["omega_uv"] = p.omega_uv;
      break;
    case PsdSpec::Kind::White:
      j["kind"] = "white";
      j["s0"] = p.s0;
      j["omega_max"] = p.band_max;
      break;
    case PsdSpec::Kind::Lorentzian:
      j["kind"] = "lorentzian";
      j["s0"] = p.s0;
      j["tau_c"] = p.tau_c;
      break;
    case PsdSpec::Kind::Tabulated:
      j["kind"] = "tabulated";
      j["omega"] = p.omega_grid;
      j["s"] = p.s_values;
      break;
  }
  return j;
}

ojson cmat_abs_json(const CMat& m) {
  ojson rows = ojson::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    ojson row = ojson::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(std::abs(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

ojson cmat_json(const CMat& m) {
  ojson rows = ojson::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    ojson row = ojson::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      row.push_back(ojson::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

ScenarioConfig ScenarioConfig::from_json(const ojson& j) {
  ScenarioConfig c = preset(j.value("name", std::string("custom")));
  c.n = j.value("n", c.n);
  if (j.contains("tfim")) {
    const auto& t = j.at("tfim");
    const std::string coupling = t.value("coupling", std::string("complete"));
    if (coupling == "complete")
      c.tfim.coupling = TfimConfig::Coupling::Complete;
    else if (coupling == "chain")
      c.tfim.coupling = TfimConfig::Coupling::Chain;
    else if (coupling == "matrix")
      c.tfim.coupling = TfimConfig::Coupling::Matrix;
    else
      throw ConfigError("unknown coupling kind: " + coupling);
    c.tfim.j = t.value("j", c.tfim.j);
    c.tfim.h = t.value("h", c.tfim.h);
    c.tfim.allow_large = t.value("allow_large", false);
    if (t.contains("j_matrix")) {
      const auto rows = t.at("j_matrix").get<std::vector<std::vector<double>>>();
      c.tfim.j_matrix.resize(rows.size(), rows.size());
      for (size_t a = 0; a < rows.size(); ++a)
        for (size_t b = 0; b < rows.size(); ++b) c.tfim.j_matrix(a, b) = rows.at(a).at(b);
    }
  }
  if (j.contains("dephasing")) {
    const std::string d = j.at("dephasing").get<std::string>();
    if (d == "global")
      c.dephasing = DephasingKind::Global;
    else if (d == "local")
      c.dephasing = DephasingKind::Local;
    else
      throw ConfigError("dephasing must be global or local");
  }
  if (j.contains("psd")) c.psd = psd_from_json(j.at("psd"));
  c.s0_t_product = j.value("s0_t_product", c.s0_t_product);
  if (j.contains("duration")) {
    const auto& d = j.at("duration");
    const std::string mode = d.value("mode", std::string("multiple_of_tau"));
    if (mode == "multiple_of_tau") {
      c.duration_mode = DurationMode::MultipleOfTau;
      c.duration_factor = d.value("factor", c.duration_factor);
    } else if (mode == "absolute") {
      c.duration_mode = DurationMode::Absolute;
      c.duration_absolute = d.at("t").get<double>();
    } else {
      throw ConfigError("duration mode must be multiple_of_tau or absolute");
    }
  }
  if (j.contains("dt")) c.dt_override = j.at("dt").get<double>();
  c.min_steps = j.value("min_steps", c.min_steps);
  c.trajectories = j.value("trajectories", c.trajectories);
  c.master_seed = j.value("master_seed", c.master_seed);
  c.workers = j.value("workers", c.workers);
  c.fast = j.value("fast", c.fast);
  c.mc_long = j.value("mc_long", c.mc_long);
  c.mc_long_factor = j.value("mc_long_factor", c.mc_long_factor);
  c.mc_long_s0_t_product = j.value("mc_long_s0_t_product", c.mc_long_s0_t_product);
  c.log_scale_heatmap = j.value("log_scale_heatmap", c.log_scale_heatmap);
  c.antithetic = j.value("antithetic", c.antithetic);
  c.synth_modes = j.value("synth_modes", c.synth_modes);
  c.freq_points = j.value("freq_points", c.freq_points);
  c.initial_state = j.value("initial_state", c.initial_state);
  const std::string mode = j.value("mode", std::string("full"));
  if (mode == "full")
    c.mode = Mode::Full;
  else if (mode == "mc")
    c.mode = Mode::MonteCarloOnly;
  else if (mode == "fff")
    c.mode = Mode::FffOnly;
  else
    throw ConfigError("mode must be full, mc or fff");
  return c;
}

ojson ScenarioConfig::to_json() const {
  ojson j;
  j["name"] = name;
  j["mode"] = mode == Mode::Full ? "full" : mode == Mode::MonteCarloOnly ? "mc" : "fff";
  j["n"] = n;
  ojson t;
  t["coupling"] = tfim.coupling == TfimConfig::Coupling::Complete ? "complete"
                  : tfim.coupling == TfimConfig::Coupling::Chain  ? "chain"
                                                                  : "matrix";
  t["j"] = tfim.j;
  t["h"] = tfim.h;
  j["tfim"] = t;
  j["dephasing"] = dephasing == DephasingKind::Global ? "global" : "local";
  j["psd"] = psd_to_json(psd);
  j["s0_t_product"] = s0_t_product;
  ojson d;
  if (duration_mode == DurationMode::MultipleOfTau) {
    d["mode"] = "multiple_of_tau";
    d["factor"] = duration_factor;
  } else {
    d["mode"] = "absolute";
    d["t"] = duration_absolute;
  }
  j["duration"] = d;
  if (dt_override) j["dt"] = *dt_override;
  j["min_steps"] = min_steps;
  j["trajectories"] = trajectories;
  j["master_seed"] = master_seed;
  // workers is an execution knob, not part of the experiment identity, so it
  // stays out of the config echo (reports must not depend on it)
  j["fast"] = fast;
  j["mc_long"] = mc_long;
  j["mc_long_factor"] = mc_long_factor;
  j["mc_long_s0_t_product"] = mc_long_s0_t_product;
  j["log_scale_heatmap"] = log_scale_heatmap;
  j["antithetic"] = antithetic;
  j["synth_modes"] = synth_modes;
  j["freq_points"] = freq_points;
  j["initial_state"] = initial_state;
  return j;
}

namespace {

CMat initial_state_density(const ScenarioConfig& c, const SectorSpectrum& spec) {
  if (c.initial_state == "plus") return plus_state_density(c.n);
  if (c.initial_state.rfind("basis:", 0) == 0) {
    const int idx = std::stoi(c.initial_state.substr(6));
    const int dim = 1 << c.n;
    if (idx < 0 || idx >= dim) throw ConfigError("initial_state basis index out of range");
    CMat rho = CMat::Zero(dim, dim);
    rho(idx, idx) = 1.0;
    return rho;
  }
  if (c.initial_state.rfind("sector:", 0) == 0) {
    const int s = std::stoi(c.initial_state.substr(7));
    if (s < 0 || s >= spec.sector_count()) throw ConfigError("initial_state sector out of range");
    // |+>^n projected into the sector and renormalized
    const CMat plus = plus_state_density(c.n);
    CMat p = CMat::Zero(spec.dim(), spec.dim());
    for (int a = 0; a < spec.multiplicities[s]; ++a) {
      const CVec v = spec.transform.col(spec.offset(s) + a);
      p += v * v.adjoint();
    }
    CMat rho = p * plus * p;
    const double tr = rho.trace().real();
    if (tr < 1e-12) throw ConfigError("initial_state projection is empty");
    return rho / tr;
  }
  throw ConfigError("unknown initial_state: " + c.initial_state);
}

struct BlockMetrics {
  std::vector<double> populations;
  double off_sps_population = 0.0;
  double offblock_max = 0.0;
};

BlockMetrics block_metrics(const CMat& rho, const SectorSpectrum& spec, int sps) {
  BlockMetrics m;
  const auto bp = block_populations(rho, spec);
  m.populations = bp.populations;
  m.off_sps_population = 1.0 - bp.populations[sps];
  m.offblock_max = bp.offblock_max.maxCoeff();
  return m;
}

}  // namespace

ScenarioReport run_scenario(const ScenarioConfig& config_in) {
  ScenarioConfig config = config_in;
  config.tfim.n = config.n;
  if (config.fast && config.trajectories == 20000) config.trajectories = 2000;

  ScenarioReport rep;

  // symmetry structure
  const CMat q = build_j_squared(config.n);
  const SectorSpectrum spec = sector_decompose(q);
  const QBasis basis = build_qbasis(spec);
  rep.spectrum = spec;
  for (int s = 0; s < spec.sector_count(); ++s) {
    rep.sector_eigenvalues.push_back(spec.eigenvalues[s]);
    rep.sector_multiplicities.push_back(spec.multiplicities[s]);
  }
  for (const auto& w : spec.warnings) rep.warnings.push_back(w);

  // duration and grid
  rep.tau = correlation_length(config.psd);
  double t_final = config.duration_mode == ScenarioConfig::DurationMode::MultipleOfTau
                       ? config.duration_factor * rep.tau
                       : config.duration_absolute;
  if (t_final <= 0) throw ConfigError("scenario duration must be positive");

  // noise amplitude from the S0*T target (pink convenience knob)
  PsdSpec psd = config.psd;
  if (config.s0_t_product > 0 && psd.kind == PsdSpec::Kind::Pink)
    psd.amplitude = config.s0_t_product * psd.omega_ir / t_final;
  rep.s0 = psd.max_value();

  const CMat h0 = build_tfim_hamiltonian(config.tfim);
  double dt = config.dt_override.value_or(default_time_step(h0, psd.support_max()));
  int steps = std::max(config.min_steps, static_cast<int>(std::ceil(t_final / dt)));
  TimeGrid grid{t_final / steps, steps};
  rep.t_final = t_final;
  rep.dt = grid.dt;
  rep.steps = steps;

  Schedule schedule = build_tfim(config.tfim, grid, q);
  NoiseModel model = build_dephasing(config.n, config.dephasing, psd);
  for (const auto& v : model.validate_mode_separation(basis))
    rep.warnings.push_back("noise model: " + v);

  // initial state and its sector
  const CMat rho0 = initial_state_density(config, spec);
  {
    const auto bp = block_populations(rho0, spec);
    int best = 0;
    for (int s = 1; s < spec.sector_count(); ++s)
      if (bp.populations[s] > bp.populations[best]) best = s;
    rep.sps_sector = best;
  }

  // ideal propagation
  const IdealResult ideal = ideal_propagate(schedule, rho0);
  rep.integrator_floor =
      block_metrics(ideal.rho_final, spec, rep.sps_sector).off_sps_population;
  rep.ideal_populations = block_populations(ideal.rho_final, spec).populations;

  // Monte Carlo at T
  const bool want_mc = config.mode != ScenarioConfig::Mode::FffOnly;
  const bool want_fff = config.mode != ScenarioConfig::Mode::MonteCarloOnly;
  rep.has_mc = want_mc;
  rep.has_fff = want_fff;
  rep.statistical_floor = 1.0 / std::sqrt(double(config.trajectories));
  if (want_mc) {
    EnsembleConfig ens;
    ens.trajectories = config.trajectories;
    ens.master_seed = config.master_seed;
    ens.workers = config.workers;
    ens.synth_modes = config.synth_modes;
    ens.antithetic = config.antithetic;
    const int n_checkpoints = 20;
    for (int cpt = 1; cpt <= n_checkpoints; ++cpt)
      ens.checkpoint_steps.push_back(steps * cpt / n_checkpoints);
    const StateEnsemble mc = ensemble_average(schedule, model, ens, rho0);
    rep.rho_mc = mc.mean_state;
    rep.statistical_floor = mc.statistical_floor;
    const BlockMetrics mc_metrics = block_metrics(rep.rho_mc, spec, rep.sps_sector);
    rep.mc_populations = mc_metrics.populations;
    rep.mc_off_sps_population = mc_metrics.off_sps_population;
    rep.mc_offblock_max = mc_metrics.offblock_max;
    for (size_t cpt = 0; cpt < ens.checkpoint_steps.size(); ++cpt) {
      rep.checkpoint_times.push_back(grid.node(ens.checkpoint_steps[cpt]));
      rep.population_series.push_back(
          block_populations(mc.checkpoint_means[cpt], spec).populations);
    }
  }

  // FFF pipeline
  CumulantSuperoperator cumulant;
  NoiseClass ncls = NoiseClass::Preserving;
  if (want_fff) {
    const NoiseModel fff_model = model.decorrelate();
    ControlMatrixOptions cm_opts;
    const ControlMatrix cm = control_matrix(ideal.cache, basis, fff_model, cm_opts);
    const CoherenceParams chi = coherence_params(cm, fff_model);
    cumulant = assemble_cumulant(chi.chi1, chi.chi2, basis);

    bool preserving = true;
    for (const auto& ch : fff_model.channels)
      preserving = preserving && classify_operator(ch.op, basis).symmetry_preserving;
    ncls = preserving ? NoiseClass::Preserving : NoiseClass::Breaking;

    rep.structure = structure_check(cumulant, basis, ncls, rep.sps_sector);
    rep.spectrum_report = cumulant_spectrum(cumulant);
    rep.rho_fff = predict_average_state(cumulant, ideal.rho_final, basis);
    const BlockMetrics fff_metrics = block_metrics(rep.rho_fff, spec, rep.sps_sector);
    rep.fff_populations = fff_metrics.populations;
    rep.fff_off_sps_population = fff_metrics.off_sps_population;
    rep.fff_offblock_max = fff_metrics.offblock_max;
    if (want_mc) rep.fff_mc_trace_distance = trace_distance(rep.rho_fff, rep.rho_mc);

    const FilterFunctions ffs = filter_functions(cm, fff_model, config.freq_points);
    rep.bounds = distance_and_bounds(cumulant, ideal.rho_final, cm, fff_model, basis,
                                     rep.sps_sector, ffs);
  }

  // figure-3 long-time analysis
  if (config.is_figure3() && want_fff) {
    rep.has_steady = true;
    rep.steady = steady_state(cumulant, basis, rep.sps_sector, ncls, ideal.rho_final);
    rep.rho_long = rep.steady.extrapolated;
    if (config.mc_long) {
      const double t_long = config.mc_long_factor * rep.tau;
      PsdSpec psd_long = config.psd;
      if (psd_long.kind == PsdSpec::Kind::Pink)
        psd_long.amplitude =
            config.mc_long_s0_t_product * psd_long.omega_ir / (2.0 * rep.tau);
      const double dt_long = config.dt_override.value_or(
          default_time_step(h0, psd_long.support_max()));
      const int steps_long =
          std::max(config.min_steps, static_cast<int>(std::ceil(t_long / dt_long)));
      TimeGrid grid_long{t_long / steps_long, steps_long};
      Schedule schedule_long = build_tfim(config.tfim, grid_long, q);
      NoiseModel model_long = build_dephasing(config.n, config.dephasing, psd_long);
      EnsembleConfig ens_long;
      ens_long.trajectories = config.trajectories;
      ens_long.master_seed = config.master_seed + 1;
      ens_long.workers = config.workers;
      ens_long.synth_modes = config.synth_modes;
      ens_long.antithetic = config.antithetic;
      const StateEnsemble mc_long = ensemble_average(schedule_long, model_long, ens_long, rho0);
      rep.rho_long = mc_long.mean_state;
    }
    rep.steady_distance_predicted = trace_distance(rep.rho_long, rep.steady.predicted);
    for (const auto& w : rep.steady.warnings) rep.warnings.push_back("steady state: " + w);
  }

  rep.config = config;
  return rep;
}

ojson ScenarioReport::to_json() const {
  ojson j;
  j["config"] = config.to_json();
  ojson prov;
  prov["tau"] = tau;
  prov["t_final"] = t_final;
  prov["dt"] = dt;
  prov["steps"] = steps;
  prov["s0"] = s0;
  prov["master_seed"] = config.master_seed;
  prov["trajectories"] = config.trajectories;
  prov["sps_sector"] = sps_sector;
  prov["sector_eigenvalues"] = sector_eigenvalues;
  prov["sector_multiplicities"] = sector_multiplicities;
  j["provenance"] = prov;

  ojson m;
  m["statistical_floor"] = statistical_floor;
  m["integrator_floor"] = integrator_floor;
  m["mc_off_sps_population"] = mc_off_sps_population;
  m["fff_off_sps_population"] = fff_off_sps_population;
  m["mc_offblock_max"] = mc_offblock_max;
  m["fff_offblock_max"] = fff_offblock_max;
  m["mc_populations"] = mc_populations;
  m["fff_populations"] = fff_populations;
  m["ideal_populations"] = ideal_populations;
  m["fff_mc_trace_distance"] = fff_mc_trace_distance;
  j["metrics"] = m;

  ojson st;
  st["pass"] = structure.pass;
  st["scale"] = structure.scale;
  st["centralizer_ladder_coupling"] = structure.centralizer_ladder_coupling;
  st["ladder_cross_class_coupling"] = structure.ladder_cross_class_coupling;
  st["block_support_leak"] = structure.block_support_leak;
  st["sector_to_ladder"] = structure.sector_to_ladder;
  st["sector_to_cartan"] = structure.sector_to_cartan;
  st["sector_to_other_within"] = structure.sector_to_other_within;
  st["offending"] = structure.offending;
  j["structure"] = st;

  ojson sp;
  sp["sym_max_eigenvalue"] = spectrum_report.sym_max_eigenvalue;
  sp["sym_scale"] = spectrum_report.sym_scale;
  sp["identity_action"] = spectrum_report.identity_action;
  sp["asym_max_real_part"] = spectrum_report.asym_max_real_part;
  sp["slowest_nonzero_rate"] = spectrum_report.slowest_nonzero_rate;
  j["cumulant_spectrum"] = sp;

  ojson b;
  b["measured_distance"] = bounds.measured_distance;
  b["eq9_symmetric"] = bounds.eq9_symmetric;
  b["eq9_nonsymmetric"] = bounds.eq9_nonsymmetric;
  b["eq9_total"] = bounds.eq9_total;
  b["eq10_white"] = bounds.eq10_white;
  b["s0_max"] = bounds.s0_max;
  j["bounds"] = b;

  if (has_steady) {
    ojson s;
    s["distance_extrapolated_to_predicted"] = steady.distance;
    s["distance_long_state_to_predicted"] = steady_distance_predicted;
    s["kernel_dim_sym"] = steady.kernel_dim_sym;
    s["stationary_dim_reachable"] = steady.stationary_dim_reachable;
    s["slowest_rate"] = steady.slowest_rate;
    s["warnings"] = steady.warnings;
    j["steady_state"] = s;
  }

  ojson ts;
  ts["times"] = checkpoint_times;
  ts["populations"] = population_series;
  j["population_series"] = ts;

  j["warnings"] = warnings;

  ojson states;
  if (has_mc)
    states["mc_abs"] = cmat_abs_json(spectrum.transform.adjoint() * rho_mc * spectrum.transform);
  if (has_fff)
    states["fff_abs"] = cmat_abs_json(spectrum.transform.adjoint() * rho_fff * spectrum.transform);
  if (has_steady && rho_long.size() > 0)
    states["long_abs"] =
        cmat_abs_json(spectrum.transform.adjoint() * rho_long * spectrum.transform);
  states["sector_offsets"] = [&] {
    std::vector<int> off;
    for (int s = 0; s < spectrum.sector_count(); ++s) off.push_back(spectrum.offset(s));
    return off;
  }();
  j["states"] = states;
  return j;
}

void write_scenario_files(const ScenarioReport& report, const std::string& out_dir) {
  fs::create_directories(out_dir);
  {
    std::ofstream f(fs::path(out_dir) / "report.json");
    f << report.to_json().dump(2) << "\n";
  }
  HeatmapStyle style;
  style.log_scale = report.config.log_scale_heatmap;
  auto write_pair = [&](const CMat& rho, const std::string& stem) {
    if (rho.size() == 0) return;
    std::ofstream csv(fs::path(out_dir) / (stem + ".csv"));
    csv << heatmap_csv(rho, report.spectrum);
    std::ofstream svg(fs::path(out_dir) / (stem + ".svg"));
    svg << heatmap_svg(rho, report.spectrum, style);
  };
  write_pair(report.rho_mc, "heatmap_mc");
  write_pair(report.rho_fff, "heatmap_fff");
  if (report.has_steady) write_pair(report.rho_long, "heatmap_long");
  {
    std::ofstream pops(fs::path(out_dir) / "populations.csv");
    pops << "time";
    for (size_t s = 0; s < report.sector_multiplicities.size(); ++s) pops << ",sector" << s;
    pops << "\n";
    char buf[40];
    for (size_t k = 0; k < report.checkpoint_times.size(); ++k) {
      std::snprintf(buf, sizeof(buf), "%.12g", report.checkpoint_times[k]);
      pops << buf;
      for (double p : report.population_series[k]) {
        std::snprintf(buf, sizeof(buf), "%.12g", p);
        pops << "," << buf;
      }
      pops << "\n";
    }
  }
}

void render_from_report(const std::string& report_path, const std::string& out_dir,
                        bool log_scale) {
  std::ifstream f(report_path);
  if (!f) throw ConfigError("cannot open report: " + report_path);
  ojson j = ojson::parse(f);
  fs::create_directories(out_dir);

  // reconstruct enough of the spectrum for sector annotations
  SectorSpectrum spec;
  const auto eig = j.at("provenance").at("sector_eigenvalues").get<std::vector<double>>();
  spec.multiplicities = j.at("provenance").at("sector_multiplicities").get<std::vector<int>>();
  spec.eigenvalues = Eigen::Map<const RVec>(eig.data(), eig.size());
  int dim = 0;
  for (int d : spec.multiplicities) dim += d;
  spec.transform = CMat::Identity(dim, dim);  // magnitudes are already in the Q basis

  HeatmapStyle style;
  style.log_scale = log_scale;
  for (const auto& key : {"mc_abs", "fff_abs", "long_abs"}) {
    if (!j.at("states").contains(key)) continue;
    const auto rows = j.at("states").at(key).get<std::vector<std::vector<double>>>();
    CMat m(dim, dim);
    for (int a = 0; a < dim; ++a)
      for (int b = 0; b < dim; ++b) m(a, b) = rows.at(a).at(b);
    std::ofstream svg(fs::path(out_dir) / (std::string("render_") + key + ".svg"));
    svg << heatmap_svg(m, spec, style);
    std::ofstream csv(fs::path(out_dir) / (std::string("render_") + key + ".csv"));
    csv << heatmap_csv(m, spec);
  }
}

}  // namespace symnoise
