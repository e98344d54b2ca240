#include <symnoise/fff.hpp>

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace symnoise {

namespace {

// trapezoid weights over [0, t_k] on nodes 0..k
inline double inner_weight(int l, int k, double dt) {
  if (k == 0) return 0.0;
  return (l == 0 || l == k) ? 0.5 * dt : dt;
}

std::vector<RVec> channel_class_weights(const QBasis& basis, const NoiseModel& model) {
  std::vector<RVec> w;
  for (const auto& ch : model.channels) {
    RVec c(basis.size());
    for (int i = 0; i < basis.size(); ++i)
      c[i] = hs_inner(basis.generators[i], ch.op).real();
    w.push_back(c);
  }
  return w;
}

}  // namespace

ControlMatrix control_matrix(const PropagatorCache& cache, const QBasis& basis,
                             const NoiseModel& model, const ControlMatrixOptions& opts) {
  model.validate();
  const int nb = basis.size();
  const int nch = model.channel_count();
  const int k_nodes = static_cast<int>(cache.anchored.size());
  if (k_nodes < 2) throw ConfigError("control_matrix: propagator cache is empty");

  ControlMatrix cm;
  cm.grid = cache.grid;
  if (cm.grid.steps != k_nodes - 1)
    throw ConfigError("control_matrix: cache grid inconsistent with node count");

  // The frame transformation preserves each ladder class individually and the
  // centralizer (Cartan + all Within) as a set, so a channel may only ever
  // have weight in the ladder classes it starts with, plus the centralizer if
  // it starts with any centralizer weight.
  const auto direct = channel_class_weights(basis, model);
  std::vector<std::vector<bool>> allowed(nch, std::vector<bool>(nb, false));
  for (int mu = 0; mu < nch; ++mu) {
    const double scale = std::max(direct[mu].cwiseAbs().maxCoeff(), 1e-300);
    bool centralizer_live = false;
    std::set<std::tuple<int, int, int>> ladder_live;
    for (int i = 0; i < nb; ++i) {
      if (std::abs(direct[mu][i]) <= opts.block_tol * scale) continue;
      if (basis.labels[i].cls == SectorClass::Ladder)
        ladder_live.insert(basis.labels[i].class_key());
      else
        centralizer_live = true;
    }
    for (int i = 0; i < nb; ++i)
      allowed[mu][i] = basis.labels[i].cls == SectorClass::Ladder
                           ? ladder_live.count(basis.labels[i].class_key()) > 0
                           : centralizer_live;
  }

  cm.r.reserve(k_nodes);
  std::vector<std::pair<int, double>> violations;  // (t_k index, relative size)
  for (int k = 0; k < k_nodes; ++k) {
    RMat rk(nch, nb);
    for (int mu = 0; mu < nch; ++mu) {
      const CMat toggled = adjoint_action(cache.anchored[k], model.channels[mu].op);
      for (int i = 0; i < nb; ++i)
        rk(mu, i) = hs_inner(basis.generators[i], toggled).real();
    }
    cm.max_entry = std::max(cm.max_entry, rk.cwiseAbs().maxCoeff());
    cm.r.push_back(std::move(rk));
  }

  // Eq. (6): the frame transformation may not move weight between classes
  for (int k = 0; k < k_nodes; ++k) {
    double worst = 0.0;
    for (int mu = 0; mu < nch; ++mu)
      for (int i = 0; i < nb; ++i)
        if (!allowed[mu][i]) worst = std::max(worst, std::abs(cm.r[k](mu, i)));
    cm.cross_class_max = std::max(cm.cross_class_max, worst / std::max(cm.max_entry, 1e-300));
    if (worst > opts.block_tol * cm.max_entry) violations.emplace_back(k, worst);
  }
  if (!violations.empty()) {
    std::ostringstream os;
    os << "control matrix block structure violated (symmetry declaration broken?) at t_k for k =";
    for (size_t i = 0; i < std::min<size_t>(violations.size(), 16); ++i)
      os << " " << violations[i].first;
    if (violations.size() > 16) os << " ...";
    throw InvariantError(os.str());
  }

  for (int i = 0; i < nb; ++i) {
    bool live = false;
    for (int mu = 0; mu < nch && !live; ++mu) live = allowed[mu][i];
    if (live) cm.support.push_back(i);
  }

  if (opts.with_square_form) {
    cm.square.reserve(k_nodes);
    for (int k = 0; k < k_nodes; ++k) {
      RMat sq(nb, nb);
      for (int j = 0; j < nb; ++j) {
        const CMat toggled = adjoint_action(cache.anchored[k], basis.generators[j]);
        for (int i = 0; i < nb; ++i)
          sq(i, j) = hs_inner(basis.generators[i], toggled).real();
      }
      cm.square.push_back(std::move(sq));
    }
  }
  return cm;
}

CoherenceParams coherence_params(const ControlMatrix& cm, const NoiseModel& model) {
  const int k_steps = cm.grid.steps;
  const double dt = cm.grid.dt;
  if (dt <= 0) throw ConfigError("coherence_params: control matrix grid has no dt");
  const int nb = static_cast<int>(cm.r.front().cols());
  const int nch = model.channel_count();

  // Nyquist guard for the colored-kernel quadrature
  for (const auto& ch : model.channels)
    if (!ch.psd.delta_like() && dt >= M_PI / ch.psd.support_max())
      throw ConfigError("coherence_params: grid too coarse for the PSD band");

  RMat lambda = RMat::Zero(nb, nb);
  RVec outer_w(k_steps + 1);
  for (int k = 0; k <= k_steps; ++k)
    outer_w[k] = (k == 0 || k == k_steps) ? 0.5 * dt : dt;

  for (int mu = 0; mu < nch; ++mu) {
    for (int nu = 0; nu < nch; ++nu) {
      if (model.cross_correlation(mu, nu) == 0.0) continue;
      const bool da = model.channels[mu].psd.delta_like();
      const bool db = model.channels[nu].psd.delta_like();
      if (da != db)
        throw ConfigError("coherence_params: cross-correlated white (unbounded) and "
                          "colored channels are not supported");
      if (da && db) {
        // C_{mu nu}(t) = corr sqrt(S0_mu S0_nu) delta(t); the delta sits on the
        // triangle boundary, hence the factor 1/2
        const double s0 = model.cross_correlation(mu, nu) *
                          std::sqrt(model.channels[mu].psd.s0 * model.channels[nu].psd.s0);
        for (int k = 0; k <= k_steps; ++k)
          lambda += (0.5 * s0 * outer_w[k]) *
                    (cm.r[k].row(mu).transpose() * cm.r[k].row(nu));
        continue;
      }
      // colored pair: lag table + ordered trapezoid over the triangle
      RVec kern(k_steps + 1);
      for (int lag = 0; lag <= k_steps; ++lag)
        kern[lag] = model.cross_kernel(mu, nu, lag * dt);
      for (int k = 1; k <= k_steps; ++k) {
        RVec g = RVec::Zero(nb);  // g_j = sum_{l<=k} iw_l kern(k-l) r_nu_j(t_l)
        for (int l = 0; l <= k; ++l)
          g += inner_weight(l, k, dt) * kern[k - l] * cm.r[l].row(nu).transpose();
        lambda += outer_w[k] * (cm.r[k].row(mu).transpose() * g.transpose());
      }
    }
  }

  CoherenceParams out;
  out.lambda = lambda;
  out.chi1 = -0.5 * (lambda + lambda.transpose());
  out.chi2 = -0.25 * (lambda - lambda.transpose());
  return out;
}

FilterFunctions filter_functions(const ControlMatrix& cm, const NoiseModel& model,
                                 int n_omega) {
  double w_lo = std::numeric_limits<double>::max(), w_hi = 0.0;
  for (const auto& ch : model.channels) {
    if (ch.psd.delta_like())
      throw ConfigError("filter_functions: unbounded white noise has no finite band; "
                        "use the time-domain route");
    w_lo = std::min(w_lo, ch.psd.support_min());
    w_hi = std::max(w_hi, ch.psd.support_max());
  }
  FilterFunctions out;
  out.domega = (w_hi - w_lo) / (n_omega - 1);
  for (int q = 0; q < n_omega; ++q) out.omega.push_back(w_lo + q * out.domega);

  const int k_steps = cm.grid.steps;
  const double dt = cm.grid.dt;
  const int nb = static_cast<int>(cm.r.front().cols());
  RVec tw(k_steps + 1);
  for (int k = 0; k <= k_steps; ++k) tw[k] = (k == 0 || k == k_steps) ? 0.5 * dt : dt;

  for (int mu = 0; mu < model.channel_count(); ++mu) {
    Eigen::MatrixXcd rt = Eigen::MatrixXcd::Zero(n_omega, nb);
    for (int q = 0; q < n_omega; ++q) {
      const Complex rot = std::exp(Complex(0, out.omega[q] * dt));
      Complex phase = 1.0;
      for (int k = 0; k <= k_steps; ++k) {
        rt.row(q) += (tw[k] * phase) * cm.r[k].row(mu).cast<Complex>();
        phase *= rot;
      }
    }
    out.rtilde.push_back(std::move(rt));
  }
  return out;
}

namespace {

// J^{mu nu}_{ij}(omega) = sum_k w_k r_mu_i(t_k) e^{i w t_k} E_nu_j(k, omega),
// E the cumulative trapezoid of r_nu_j(t_l) e^{-i w t_l}. Returns Re J for all
// (i, j) in support x support at one frequency.
RMat re_j_at_omega(const ControlMatrix& cm, int mu, int nu, double omega,
                   const std::vector<int>& support) {
  const int k_steps = cm.grid.steps;
  const double dt = cm.grid.dt;
  const int ns = static_cast<int>(support.size());
  Eigen::VectorXcd e_minus = Eigen::VectorXcd::Zero(ns);  // cumulative for nu
  RMat rej = RMat::Zero(ns, ns);
  const Complex rot = std::exp(Complex(0, omega * dt));
  Complex phase = 1.0;
  Eigen::VectorXcd prev(ns), cur(ns);
  for (int s = 0; s < ns; ++s) prev[s] = cm.r[0](nu, support[s]);  // e^{-i w 0} = 1
  for (int k = 1; k <= k_steps; ++k) {
    const Complex ph_k = std::pow(rot, k);  // bounded k, cheap enough
    for (int s = 0; s < ns; ++s) cur[s] = std::conj(ph_k) * cm.r[k](nu, support[s]);
    e_minus += (0.5 * dt) * (prev + cur);
    prev = cur;
    const double wk = (k == k_steps) ? 0.5 * dt : dt;
    for (int si = 0; si < ns; ++si) {
      const Complex a = wk * ph_k * cm.r[k](mu, support[si]);
      for (int sj = 0; sj < ns; ++sj)
        rej(si, sj) += (a * e_minus[sj]).real();
    }
  }
  return rej;
}

}  // namespace

CoherenceParams coherence_params_frequency(const ControlMatrix& cm,
                                           const NoiseModel& model,
                                           const FilterFunctions& ffs) {
  const int nb = static_cast<int>(cm.r.front().cols());
  const int n_omega = static_cast<int>(ffs.omega.size());
  const auto& sup = cm.support;
  const int ns = static_cast<int>(sup.size());

  RMat chi1 = RMat::Zero(nb, nb), chi2 = RMat::Zero(nb, nb);
  for (int mu = 0; mu < model.channel_count(); ++mu) {
    for (int nu = 0; nu < model.channel_count(); ++nu) {
      const double corr = model.cross_correlation(mu, nu);
      if (corr == 0.0) continue;
      RMat acc1 = RMat::Zero(ns, ns), acc2 = RMat::Zero(ns, ns);
      for (int q = 0; q < n_omega; ++q) {
        const double w = ffs.omega[q];
        const double s = corr * std::sqrt(model.channels[mu].psd.value(w) *
                                          model.channels[nu].psd.value(w));
        if (s == 0.0) continue;
        const double quad_w = (q == 0 || q == n_omega - 1) ? 0.5 * ffs.domega : ffs.domega;
        // first order: Re F_ij = Re[rt_mu_i rt_nu_j^*]
        for (int si = 0; si < ns; ++si)
          for (int sj = 0; sj < ns; ++sj)
            acc1(si, sj) += quad_w * s *
                            (ffs.rtilde[mu](q, sup[si]) *
                             std::conj(ffs.rtilde[nu](q, sup[sj])))
                                .real();
        // second order kernel G_ij = (Re J^{mu nu}_ij - Re J^{nu mu}_ji)/2
        const RMat rj = re_j_at_omega(cm, mu, nu, w, sup);
        const RMat rj_swap = re_j_at_omega(cm, nu, mu, w, sup);
        acc2 += quad_w * s * 0.5 * (rj - rj_swap.transpose());
      }
      for (int si = 0; si < ns; ++si)
        for (int sj = 0; sj < ns; ++sj) {
          chi1(sup[si], sup[sj]) += -acc1(si, sj) / (2.0 * M_PI);
          chi2(sup[si], sup[sj]) += -acc2(si, sj) / (2.0 * M_PI);
        }
    }
  }
  CoherenceParams out;
  out.chi1 = 0.5 * (chi1 + chi1.transpose());
  out.chi2 = 0.5 * (chi2 - chi2.transpose());
  out.lambda = RMat::Zero(nb, nb);
  return out;
}

CumulantSuperoperator assemble_cumulant(const RMat& chi1_in, const RMat& chi2_in,
                                        const QBasis& basis) {
  const int nb = basis.size();
  if (chi1_in.rows() != nb || chi2_in.rows() != nb)
    throw ConfigError("assemble_cumulant: chi matrix size mismatch");
  if ((chi1_in - chi1_in.transpose()).cwiseAbs().maxCoeff() >
      1e-9 * std::max(1e-300, chi1_in.cwiseAbs().maxCoeff()))
    throw InvariantError("assemble_cumulant: chi1 must be symmetric");
  if ((chi2_in + chi2_in.transpose()).cwiseAbs().maxCoeff() >
      1e-9 * std::max(1e-300, chi2_in.cwiseAbs().maxCoeff()))
    throw InvariantError("assemble_cumulant: chi2 must be antisymmetric");

  CumulantSuperoperator c;
  c.chi1 = 0.5 * (chi1_in + chi1_in.transpose());
  c.chi2 = 0.5 * (chi2_in - chi2_in.transpose());

  const int n = basis.dim();
  // m_j = sum_i chi1_ij x_i ; W = sum_ij chi2_ij [x_i, x_j]
  std::vector<CMat> m(nb, CMat::Zero(n, n));
  CMat w2 = CMat::Zero(n, n);
  for (int j = 0; j < nb; ++j) {
    for (int i = 0; i < nb; ++i)
      if (c.chi1(i, j) != 0.0) m[j] += c.chi1(i, j) * basis.generators[i];
    CMat mj2 = CMat::Zero(n, n);
    for (int i = 0; i < nb; ++i)
      if (c.chi2(i, j) != 0.0) mj2 += c.chi2(i, j) * basis.generators[i];
    w2 += mj2 * basis.generators[j] - basis.generators[j] * mj2;
  }

  const int m_dim = basis.liouville_size();
  c.liouville.resize(m_dim, m_dim);
  for (int l = 0; l < m_dim; ++l) {
    const CMat& xl = basis.liouville_element(l);
    CMat out = w2 * xl - xl * w2;
    for (int j = 0; j < nb; ++j) {
      if (m[j].isZero(0.0)) continue;
      const CMat cj = basis.generators[j] * xl - xl * basis.generators[j];
      out += m[j] * cj - cj * m[j];
    }
    for (int k = 0; k < m_dim; ++k)
      c.liouville(k, l) = hs_inner(basis.liouville_element(k), out).real();
  }
  c.sym = 0.5 * (c.liouville + c.liouville.transpose());
  c.asym = 0.5 * (c.liouville - c.liouville.transpose());
  c.norm_max = c.liouville.cwiseAbs().maxCoeff();
  return c;
}

SpectrumReport cumulant_spectrum(const CumulantSuperoperator& c) {
  SpectrumReport rep;
  Eigen::SelfAdjointEigenSolver<RMat> es(c.sym);
  rep.sym_max_eigenvalue = es.eigenvalues().maxCoeff();
  rep.sym_scale = es.eigenvalues().cwiseAbs().maxCoeff();
  rep.identity_action =
      std::max(c.liouville.col(0).cwiseAbs().maxCoeff(), c.liouville.row(0).cwiseAbs().maxCoeff());
  Eigen::EigenSolver<RMat> ea(c.asym);
  rep.asym_max_real_part = ea.eigenvalues().real().cwiseAbs().maxCoeff();
  Eigen::EigenSolver<RMat> ef(c.liouville);
  double slowest = std::numeric_limits<double>::max();
  for (Eigen::Index k = 0; k < ef.eigenvalues().size(); ++k) {
    const double re = -ef.eigenvalues()[k].real();
    if (re > 1e-10 * std::max(rep.sym_scale, 1e-300)) slowest = std::min(slowest, re);
  }
  rep.slowest_nonzero_rate = slowest == std::numeric_limits<double>::max() ? 0.0 : slowest;
  return rep;
}

namespace {

// Hermitian operator basis of the block of sector s: E_aa, X_ab, Y_ab built
// from the sector's eigenvector columns.
std::vector<CMat> sector_support_ops(const QBasis& basis, int s) {
  const auto& spec = basis.spectrum;
  const CMat& v = spec.transform;
  const int off = spec.offset(s);
  const int d = spec.multiplicities[s];
  std::vector<CMat> ops;
  for (int a = 0; a < d; ++a) {
    const CVec va = v.col(off + a);
    ops.push_back(va * va.adjoint());
    for (int b = a + 1; b < d; ++b) {
      const CVec vb = v.col(off + b);
      CMat x = (va * vb.adjoint() + vb * va.adjoint()) / std::sqrt(2.0);
      CMat y = (Complex(0, 1) * va * vb.adjoint() - Complex(0, 1) * vb * va.adjoint()) /
               std::sqrt(2.0);
      ops.push_back(std::move(x));
      ops.push_back(std::move(y));
    }
  }
  return ops;
}

// magnitude of the component of y lying outside the block of sector s
double off_sector_magnitude(const CMat& y, const SectorSpectrum& spec, int s) {
  const CMat r = spec.transform.adjoint() * y * spec.transform;
  double leak = 0.0;
  const int off = spec.offset(s);
  const int d = spec.multiplicities[s];
  for (Eigen::Index i = 0; i < r.rows(); ++i)
    for (Eigen::Index j = 0; j < r.cols(); ++j) {
      const bool inside = i >= off && i < off + d && j >= off && j < off + d;
      if (!inside) leak = std::max(leak, std::abs(r(i, j)));
    }
  return leak;
}

}  // namespace

StructureReport structure_check(const CumulantSuperoperator& c, const QBasis& basis,
                                NoiseClass noise_class, int sps_sector, double rel_tol) {
  StructureReport rep;
  rep.scale = std::max(c.norm_max, 1e-300);
  rep.class_order = basis.class_list();
  const int nc = static_cast<int>(rep.class_order.size());
  rep.class_coupling = RMat::Zero(nc + 1, nc + 1);  // slot 0 = identity direction

  auto class_slot = [&](int liouville_index) {
    if (liouville_index == 0) return 0;
    const auto key = basis.labels[liouville_index - 1].class_key();
    for (int cidx = 0; cidx < nc; ++cidx)
      if (rep.class_order[cidx].class_key() == key) return cidx + 1;
    return -1;
  };
  const int m_dim = basis.liouville_size();
  std::vector<int> slot(m_dim);
  for (int k = 0; k < m_dim; ++k) slot[k] = class_slot(k);
  for (int k = 0; k < m_dim; ++k)
    for (int l = 0; l < m_dim; ++l) {
      double& cell = rep.class_coupling(slot[k], slot[l]);
      cell = std::max(cell, std::abs(c.liouville(k, l)));
    }

  auto is_ladder = [&](const GenLabel& g) { return g.cls == SectorClass::Ladder; };
  for (int a = 0; a < nc; ++a)
    for (int b = 0; b < nc; ++b) {
      const bool la = is_ladder(rep.class_order[a]);
      const bool lb = is_ladder(rep.class_order[b]);
      const double v = rep.class_coupling(a + 1, b + 1);
      if (la != lb)
        rep.centralizer_ladder_coupling = std::max(rep.centralizer_ladder_coupling, v);
      else if (la && lb && a != b)
        rep.ladder_cross_class_coupling = std::max(rep.ladder_cross_class_coupling, v);
    }

  // image of every operator supported in the SPS block
  const auto ops = sector_support_ops(basis, sps_sector);
  for (const auto& op : ops) {
    const RVec img = c.liouville * expand_hermitian(op, basis);
    const CMat y = reconstruct(img, basis);
    if (noise_class == NoiseClass::Preserving)
      rep.block_support_leak =
          std::max(rep.block_support_leak, off_sector_magnitude(y, basis.spectrum, sps_sector));
    // decompose the image over label classes
    for (int i = 0; i < basis.size(); ++i) {
      const double w = std::abs(img[i + 1]);
      const auto& lab = basis.labels[i];
      if (lab.cls == SectorClass::Ladder)
        rep.sector_to_ladder = std::max(rep.sector_to_ladder, w);
      else if (lab.cls == SectorClass::Cartan)
        rep.sector_to_cartan = std::max(rep.sector_to_cartan, w);
      else if (lab.sector_a != sps_sector)
        rep.sector_to_other_within = std::max(rep.sector_to_other_within, w);
    }
  }

  const double tol_abs = rel_tol * rep.scale;
  if (noise_class == NoiseClass::Preserving) {
    rep.pass = rep.centralizer_ladder_coupling <= tol_abs &&
               rep.ladder_cross_class_coupling <= tol_abs &&
               rep.block_support_leak <= tol_abs && rep.sector_to_ladder <= tol_abs;
    if (!rep.pass) {
      std::ostringstream os;
      os << "preserving-noise structure violated: centralizer<->ladder "
         << rep.centralizer_ladder_coupling << ", ladder cross-class "
         << rep.ladder_cross_class_coupling << ", block-support leak "
         << rep.block_support_leak << " (tol " << tol_abs << ")";
      rep.offending.push_back(os.str());
    }
  } else {
    rep.pass = rep.sector_to_ladder <= tol_abs;
    if (!rep.pass) {
      std::ostringstream os;
      os << "breaking-noise structure violated: sector-q -> ladder coupling "
         << rep.sector_to_ladder << " (tol " << tol_abs << ")";
      rep.offending.push_back(os.str());
    }
  }
  return rep;
}

CMat predict_average_state(const CumulantSuperoperator& c, const CMat& rho0_final,
                           const QBasis& basis, bool first_order) {
  const RVec c0 = expand_hermitian(rho0_final, basis);
  RVec cf;
  if (first_order) {
    cf = c0 + c.liouville * c0;
  } else {
    const RMat e = c.liouville.exp();
    cf = e * c0;
  }
  return reconstruct(cf, basis);
}

BoundReport distance_and_bounds(const CumulantSuperoperator& c, const CMat& rho0_final,
                                const ControlMatrix& cm, const NoiseModel& model,
                                const QBasis& basis, int sps_sector,
                                const FilterFunctions& ffs) {
  BoundReport rep;
  rep.sps_sector = sps_sector;

  const RVec img = c.liouville * expand_hermitian(rho0_final, basis);
  rep.measured_distance = 0.5 * trace_norm(reconstruct(img, basis));

  // psi_ij = sum_{mu nu} (1/2pi) int S_{mu nu} (|F| + |G|) domega over support
  const auto& sup = cm.support;
  const int ns = static_cast<int>(sup.size());
  RMat psi = RMat::Zero(ns, ns);
  const int n_omega = static_cast<int>(ffs.omega.size());
  for (int mu = 0; mu < model.channel_count(); ++mu)
    for (int nu = 0; nu < model.channel_count(); ++nu) {
      const double corr = model.cross_correlation(mu, nu);
      if (corr == 0.0) continue;
      for (int q = 0; q < n_omega; ++q) {
        const double w = ffs.omega[q];
        const double s = std::abs(corr) * std::sqrt(model.channels[mu].psd.value(w) *
                                                    model.channels[nu].psd.value(w));
        if (s == 0.0) continue;
        const double quad_w = (q == 0 || q == n_omega - 1) ? 0.5 * ffs.domega : ffs.domega;
        const RMat rj = re_j_at_omega(cm, mu, nu, w, sup);
        const RMat rj_swap = re_j_at_omega(cm, nu, mu, w, sup);
        for (int si = 0; si < ns; ++si)
          for (int sj = 0; sj < ns; ++sj) {
            const double f_abs = std::abs(ffs.rtilde[mu](q, sup[si])) *
                                 std::abs(ffs.rtilde[nu](q, sup[sj]));
            const double g_abs = std::abs(0.5 * (rj(si, sj) - rj_swap(sj, si)));
            psi(si, sj) += quad_w * s * (f_abs + g_abs) / (2.0 * M_PI);
          }
      }
    }

  for (int si = 0; si < ns; ++si)
    for (int sj = 0; sj < ns; ++sj) {
      const bool ladder_i = basis.labels[sup[si]].cls == SectorClass::Ladder;
      const bool ladder_j = basis.labels[sup[sj]].cls == SectorClass::Ladder;
      if (ladder_i || ladder_j)
        rep.eq9_nonsymmetric += psi(si, sj);
      else
        rep.eq9_symmetric += psi(si, sj);
    }
  rep.eq9_total = rep.eq9_symmetric + rep.eq9_nonsymmetric;

  double s0 = 0.0;
  for (const auto& ch : model.channels) s0 = std::max(s0, ch.psd.max_value());
  rep.s0_max = s0;
  const auto dims = centralizer_dims(basis);
  double poly = std::pow(double(dims.n_within[sps_sector]), 4);
  for (const auto& [key, count] : dims.n_ladder)
    if (key.first == sps_sector || key.second == sps_sector)
      poly += std::pow(double(count), 4);
  rep.eq10_white = 2.0 * s0 * cm.grid.duration() * poly;
  return rep;
}

SteadyStateReport steady_state(const CumulantSuperoperator& c, const QBasis& basis,
                               int sector, NoiseClass noise_class, const CMat& rho0_final) {
  SteadyStateReport rep;
  const int n = basis.dim();
  const auto& spec = basis.spectrum;

  if (noise_class == NoiseClass::Preserving) {
    CMat p = CMat::Zero(n, n);
    for (int a = 0; a < spec.multiplicities[sector]; ++a) {
      const CVec v = spec.transform.col(spec.offset(sector) + a);
      p += v * v.adjoint();
    }
    rep.predicted = p / double(spec.multiplicities[sector]);
  } else {
    rep.predicted = CMat::Identity(n, n) / double(n);
  }

  const double scale = std::max(c.norm_max, 1e-300);

  // spectral projector onto the (clustered) zero eigenvalue
  Eigen::EigenSolver<RMat> es(c.liouville);
  const Eigen::VectorXcd lam = es.eigenvalues();
  const Eigen::MatrixXcd vec = es.eigenvectors();
  Eigen::VectorXcd coeff =
      vec.partialPivLu().solve(expand_hermitian(rho0_final, basis).cast<Complex>());
  double slowest = std::numeric_limits<double>::max();
  for (Eigen::Index k = 0; k < lam.size(); ++k) {
    if (std::abs(lam[k]) <= 1e-9 * scale) continue;
    slowest = std::min(slowest, -lam[k].real());
    coeff[k] = 0.0;
  }
  rep.slowest_rate = slowest == std::numeric_limits<double>::max() ? 0.0 : slowest;
  if (rep.slowest_rate <= 0.0)
    rep.warnings.push_back("cumulant has nondecaying modes outside the stationary cluster");
  const Eigen::VectorXcd cf = vec * coeff;
  if (cf.imag().cwiseAbs().maxCoeff() > 1e-8)
    rep.warnings.push_back("stationary projection has a nonnegligible imaginary part");
  rep.extrapolated = reconstruct(cf.real(), basis);
  // the stationary projection preserves trace but may pick up tiny asymmetry
  rep.extrapolated = 0.5 * (rep.extrapolated + rep.extrapolated.adjoint().eval());
  rep.distance = trace_distance(rep.extrapolated, rep.predicted);

  Eigen::SelfAdjointEigenSolver<RMat> ess(c.sym);
  const double sym_scale = std::max(ess.eigenvalues().cwiseAbs().maxCoeff(), 1e-300);
  rep.kernel_dim_sym = 0;
  for (Eigen::Index k = 0; k < ess.eigenvalues().size(); ++k)
    if (std::abs(ess.eigenvalues()[k]) <= 1e-9 * sym_scale) ++rep.kernel_dim_sym;

  // Krylov span of rho_0(T) under C, then the stationary directions within it
  const int m_dim = basis.liouville_size();
  RMat krylov(m_dim, 0);
  RVec v = expand_hermitian(rho0_final, basis);
  for (int it = 0; it < m_dim; ++it) {
    RVec w = v;
    for (int col = 0; col < krylov.cols(); ++col)
      w -= krylov.col(col).dot(w) * krylov.col(col);
    const double nrm = w.norm();
    if (nrm < 1e-10 * std::max(1.0, v.norm())) break;
    krylov.conservativeResize(Eigen::NoChange, krylov.cols() + 1);
    krylov.col(krylov.cols() - 1) = w / nrm;
    v = c.liouville * krylov.col(krylov.cols() - 1);
  }
  const RMat ck = c.liouville * krylov;
  Eigen::JacobiSVD<RMat> svd(ck);
  rep.stationary_dim_reachable = 0;
  const double smax = svd.singularValues().size() ? svd.singularValues().maxCoeff() : 0.0;
  for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k)
    if (svd.singularValues()[k] <= 1e-9 * std::max(smax, scale))
      ++rep.stationary_dim_reachable;
  if (rep.stationary_dim_reachable > 1)
    rep.warnings.push_back(
        "stationary subspace reachable from rho_0(T) has dimension " +
        std::to_string(rep.stationary_dim_reachable) +
        " > 1: extra conserved structure");
  return rep;
}

}  // namespace symnoise
