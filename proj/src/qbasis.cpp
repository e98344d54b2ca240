#include <symnoise/qbasis.hpp>

#include <nlohmann/json.hpp>

#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <sstream>

namespace symnoise {

using json = nlohmann::json;

int SectorSpectrum::offset(int s) const {
  int off = 0;
  for (int i = 0; i < s; ++i) off += multiplicities[i];
  return off;
}

std::string GenLabel::to_string() const {
  std::ostringstream os;
  switch (cls) {
    case SectorClass::Cartan:
      os << "cartan[" << index << "]";
      break;
    case SectorClass::Within:
      os << "within(q" << sector_a << ")[" << index << "]";
      break;
    case SectorClass::Ladder:
      os << "ladder(q" << sector_a << "->q" << sector_b << ")[" << index << "]";
      break;
  }
  return os.str();
}

std::vector<int> QBasis::indices_of_class(SectorClass cls) const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i)
    if (labels[i].cls == cls) out.push_back(i);
  return out;
}

std::vector<int> QBasis::indices_of_class(const GenLabel& like) const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i)
    if (labels[i].class_key() == like.class_key()) out.push_back(i);
  return out;
}

std::vector<GenLabel> QBasis::class_list() const {
  std::vector<GenLabel> out;
  for (const auto& l : labels) {
    bool seen = false;
    for (const auto& c : out)
      if (c.class_key() == l.class_key()) { seen = true; break; }
    if (!seen) out.push_back(l);
  }
  return out;
}

SectorSpectrum sector_decompose(const CMat& q, double grouping_tol) {
  require_hermitian(q, "sector_decompose");
  Eigen::SelfAdjointEigenSolver<CMat> es(q);
  const RVec& w = es.eigenvalues();  // ascending
  const int n = static_cast<int>(w.size());

  double scale = std::max(w.cwiseAbs().maxCoeff(), 1e-300);
  double tol = grouping_tol > 0 ? grouping_tol : 1e-8 * scale;

  SectorSpectrum out;
  out.grouping_tol = tol;
  std::vector<double> distinct;
  std::vector<int> mult;
  int start = 0;
  for (int k = 1; k <= n; ++k) {
    if (k == n || w[k] - w[start] > tol) {
      distinct.push_back(w.segment(start, k - start).mean());
      mult.push_back(k - start);
      start = k;
    }
  }
  for (int k = 1; k < n; ++k) {
    double gap = w[k] - w[k - 1];
    if (gap > 0.5 * tol && gap < 2.0 * tol) {
      std::ostringstream os;
      os << "ambiguous eigenvalue clustering: gap " << gap << " between " << w[k - 1]
         << " and " << w[k] << " is close to grouping_tol " << tol;
      out.warnings.push_back(os.str());
    }
  }

  out.eigenvalues = Eigen::Map<RVec>(distinct.data(), distinct.size());
  out.multiplicities = mult;
  out.transform = es.eigenvectors();

  // Stabilize each degenerate block with a thin QR so the in-block basis is an
  // exactly orthonormal, deterministic function of the solver output.
  int off = 0;
  for (int s = 0; s < out.sector_count(); ++s) {
    int d = mult[s];
    if (d > 1) {
      Eigen::HouseholderQR<CMat> qr(out.transform.middleCols(off, d));
      CMat qfac = qr.householderQ() * CMat::Identity(n, d);
      // fix the phase of each column: largest-magnitude entry made real positive
      for (int c = 0; c < d; ++c) {
        Eigen::Index imax;
        qfac.col(c).cwiseAbs().maxCoeff(&imax);
        Complex z = qfac(imax, c);
        qfac.col(c) *= std::conj(z) / std::abs(z);
      }
      out.transform.middleCols(off, d) = qfac;
    } else {
      Eigen::Index imax;
      out.transform.col(off).cwiseAbs().maxCoeff(&imax);
      Complex z = out.transform(imax, off);
      out.transform.col(off) *= std::conj(z) / std::abs(z);
    }
    off += d;
  }
  return out;
}

QBasis build_qbasis(const SectorSpectrum& spec) {
  const int n = spec.dim();
  const CMat& v = spec.transform;
  QBasis basis;
  basis.spectrum = spec;
  basis.identity_direction = CMat::Identity(n, n) / std::sqrt(double(n));

  // sector index of each eigenbasis column
  std::vector<int> sector_of(n);
  {
    int col = 0;
    for (int s = 0; s < spec.sector_count(); ++s)
      for (int m = 0; m < spec.multiplicities[s]; ++m) sector_of[col++] = s;
  }

  auto push = [&](const CMat& g_eig, GenLabel label, double root) {
    basis.generators.push_back(v * g_eig * v.adjoint());
    basis.labels.push_back(label);
    basis.root_projections.push_back(root);
  };

  // Cartan: N-1 diagonal traceless matrices, HS-normalized so Tr(d^2) = 1.
  for (int l = 1; l < n; ++l) {
    CMat d = CMat::Zero(n, n);
    const double f = 1.0 / std::sqrt(double(l) * (l + 1));
    for (int j = 0; j < l; ++j) d(j, j) = f;
    d(l, l) = -double(l) * f;
    push(d, {SectorClass::Cartan, -1, -1, l - 1}, 0.0);
  }

  // The symmetric/antisymmetric pair for eigenbasis columns (a, b), a < b.
  // x + i y = sqrt(2) |b><a| raises the Q eigenvalue when b sits in the
  // higher sector, so [Q, x +- i y] = +-(q_b - q_a)(x +- i y).
  auto pair_x = [&](int a, int b) {
    CMat g = CMat::Zero(n, n);
    g(a, b) = 1.0 / std::sqrt(2.0);
    g(b, a) = 1.0 / std::sqrt(2.0);
    return g;
  };
  auto pair_y = [&](int a, int b) {
    CMat g = CMat::Zero(n, n);
    g(a, b) = Complex(0.0, 1.0) / std::sqrt(2.0);
    g(b, a) = Complex(0.0, -1.0) / std::sqrt(2.0);
    return g;
  };

  // Within(q): pairs inside one sector block
  for (int s = 0; s < spec.sector_count(); ++s) {
    const int off = spec.offset(s);
    const int d = spec.multiplicities[s];
    int idx = 0;
    for (int a = off; a < off + d; ++a)
      for (int b = a + 1; b < off + d; ++b) {
        push(pair_x(a, b), {SectorClass::Within, s, -1, idx++}, 0.0);
        push(pair_y(a, b), {SectorClass::Within, s, -1, idx++}, 0.0);
      }
  }

  // Ladder(q -> q'): pairs connecting sectors s1 < s2
  for (int s1 = 0; s1 < spec.sector_count(); ++s1)
    for (int s2 = s1 + 1; s2 < spec.sector_count(); ++s2) {
      const double root = spec.eigenvalues[s2] - spec.eigenvalues[s1];
      int idx = 0;
      for (int a = spec.offset(s1); a < spec.offset(s1) + spec.multiplicities[s1]; ++a)
        for (int b = spec.offset(s2); b < spec.offset(s2) + spec.multiplicities[s2]; ++b) {
          push(pair_x(a, b), {SectorClass::Ladder, s1, s2, idx++}, root);
          push(pair_y(a, b), {SectorClass::Ladder, s1, s2, idx++}, root);
        }
    }

  return basis;
}

CentralizerDims centralizer_dims(const QBasis& basis) {
  CentralizerDims out;
  const auto& spec = basis.spectrum;
  out.n_within.assign(spec.sector_count(), 0);
  for (const auto& l : basis.labels) {
    if (l.cls == SectorClass::Within)
      ++out.n_within[l.sector_a];
    else if (l.cls == SectorClass::Ladder)
      ++out.n_ladder[{l.sector_a, l.sector_b}];
  }
  out.n_centralizer = basis.dim() - 1;
  for (int c : out.n_within) out.n_centralizer += c;
  return out;
}

ClassifyReport classify_operator(const CMat& x, const QBasis& basis, double rel_tol) {
  require_hermitian(x, "classify_operator");
  ClassifyReport rep;
  std::map<std::tuple<int, int, int>, double> sq;
  double cart = 0, with = 0, ladd = 0;
  for (int i = 0; i < basis.size(); ++i) {
    const double c = hs_inner(basis.generators[i], x).real();
    sq[basis.labels[i].class_key()] += c * c;
    switch (basis.labels[i].cls) {
      case SectorClass::Cartan: cart += c * c; break;
      case SectorClass::Within: with += c * c; break;
      case SectorClass::Ladder: ladd += c * c; break;
    }
  }
  for (auto& [k, v] : sq) rep.class_weights[k] = std::sqrt(v);
  rep.cartan_weight = std::sqrt(cart);
  rep.within_weight = std::sqrt(with);
  rep.ladder_weight = std::sqrt(ladd);
  rep.identity_weight = std::abs(hs_inner(basis.identity_direction, x));
  rep.symmetry_preserving = rep.ladder_weight <= rel_tol * std::max(hs_norm(x), 1e-300);
  return rep;
}

BlockPopulations block_populations(const CMat& rho, const SectorSpectrum& spec) {
  require_hermitian(rho, "block_populations");
  const double tr = rho.trace().real();
  if (std::abs(tr - 1.0) > 1e-8)
    throw InvariantError("block_populations: trace " + std::to_string(tr) + " != 1");

  const CMat r = spec.transform.adjoint() * rho * spec.transform;
  const int ns = spec.sector_count();
  BlockPopulations out;
  out.offblock_max = RMat::Zero(ns, ns);
  out.offblock_total = RMat::Zero(ns, ns);
  for (int s1 = 0; s1 < ns; ++s1) {
    const auto blk = r.block(spec.offset(s1), spec.offset(s1), spec.multiplicities[s1],
                             spec.multiplicities[s1]);
    out.populations.push_back(blk.trace().real());
    for (int s2 = 0; s2 < ns; ++s2) {
      if (s1 == s2) continue;
      const auto off = r.block(spec.offset(s1), spec.offset(s2), spec.multiplicities[s1],
                               spec.multiplicities[s2]);
      out.offblock_max(s1, s2) = off.cwiseAbs().maxCoeff();
      out.offblock_total(s1, s2) = off.cwiseAbs().sum();
    }
  }
  return out;
}

RVec expand_hermitian(const CMat& x, const QBasis& basis) {
  require_hermitian(x, "expand_hermitian");
  RVec c(basis.liouville_size());
  for (int k = 0; k < basis.liouville_size(); ++k)
    c[k] = hs_inner(basis.liouville_element(k), x).real();
  return c;
}

CMat reconstruct(const RVec& coefficients, const QBasis& basis) {
  if (coefficients.size() != basis.liouville_size())
    throw ConfigError("reconstruct: coefficient count mismatch");
  CMat out = CMat::Zero(basis.dim(), basis.dim());
  for (int k = 0; k < basis.liouville_size(); ++k)
    out += coefficients[k] * basis.liouville_element(k);
  return out;
}

namespace {

json cmat_to_json(const CMat& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

CMat cmat_from_json(const json& j) {
  const auto rows = j.size();
  if (rows == 0) return CMat(0, 0);
  const auto cols = j.at(0).size();
  CMat m(rows, cols);
  for (size_t i = 0; i < rows; ++i)
    for (size_t c = 0; c < cols; ++c)
      m(i, c) = Complex(j.at(i).at(c).at(0).get<double>(), j.at(i).at(c).at(1).get<double>());
  return m;
}

const char* class_name(SectorClass c) {
  switch (c) {
    case SectorClass::Cartan: return "cartan";
    case SectorClass::Within: return "within";
    case SectorClass::Ladder: return "ladder";
  }
  return "?";
}

SectorClass class_from_name(const std::string& s) {
  if (s == "cartan") return SectorClass::Cartan;
  if (s == "within") return SectorClass::Within;
  if (s == "ladder") return SectorClass::Ladder;
  throw ConfigError("unknown generator class: " + s);
}

}  // namespace

std::string qbasis_to_json(const QBasis& basis) {
  json j;
  j["dim"] = basis.dim();
  j["grouping_tol"] = basis.spectrum.grouping_tol;
  j["sectors"] = json::array();
  for (int s = 0; s < basis.spectrum.sector_count(); ++s)
    j["sectors"].push_back({{"eigenvalue", basis.spectrum.eigenvalues[s]},
                            {"multiplicity", basis.spectrum.multiplicities[s]}});
  j["transform"] = cmat_to_json(basis.spectrum.transform);
  j["generators"] = json::array();
  for (int i = 0; i < basis.size(); ++i) {
    const auto& l = basis.labels[i];
    json g;
    g["class"] = class_name(l.cls);
    g["sector_a"] = l.sector_a;
    g["sector_b"] = l.sector_b;
    g["index"] = l.index;
    g["root_projection"] = basis.root_projections[i];
    g["matrix"] = cmat_to_json(basis.generators[i]);
    j["generators"].push_back(std::move(g));
  }
  return j.dump(2);
}

QBasis qbasis_from_json(const std::string& text) {
  json j = json::parse(text);
  QBasis basis;
  auto& spec = basis.spectrum;
  const auto& sect = j.at("sectors");
  spec.eigenvalues.resize(sect.size());
  for (size_t s = 0; s < sect.size(); ++s) {
    spec.eigenvalues[s] = sect.at(s).at("eigenvalue").get<double>();
    spec.multiplicities.push_back(sect.at(s).at("multiplicity").get<int>());
  }
  spec.grouping_tol = j.at("grouping_tol").get<double>();
  spec.transform = cmat_from_json(j.at("transform"));
  const int n = j.at("dim").get<int>();
  if (spec.dim() != n) throw ConfigError("qbasis_from_json: inconsistent dim");
  basis.identity_direction = CMat::Identity(n, n) / std::sqrt(double(n));
  for (const auto& g : j.at("generators")) {
    GenLabel l;
    l.cls = class_from_name(g.at("class").get<std::string>());
    l.sector_a = g.at("sector_a").get<int>();
    l.sector_b = g.at("sector_b").get<int>();
    l.index = g.at("index").get<int>();
    basis.labels.push_back(l);
    basis.root_projections.push_back(g.at("root_projection").get<double>());
    basis.generators.push_back(cmat_from_json(g.at("matrix")));
  }
  return basis;
}

}  // namespace symnoise
