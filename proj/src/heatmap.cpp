#include <symnoise/heatmap.hpp>

#include <cmath>
#include <cstdio>
#include <sstream>
#include <vector>

namespace symnoise {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::vector<std::string> index_names(const SectorSpectrum& spec) {
  std::vector<std::string> names;
  for (int s = 0; s < spec.sector_count(); ++s)
    for (int m = 0; m < spec.multiplicities[s]; ++m) {
      std::ostringstream os;
      os << "q" << s << "[" << m << "]";
      names.push_back(os.str());
    }
  return names;
}

}  // namespace

std::string heatmap_csv(const CMat& rho, const SectorSpectrum& spec) {
  if (rho.rows() != spec.dim() || rho.cols() != spec.dim())
    throw ConfigError("heatmap_csv: state dimension does not match spectrum");
  const CMat r = spec.transform.adjoint() * rho * spec.transform;
  const auto names = index_names(spec);
  std::ostringstream os;
  os << "index";
  for (const auto& n : names) os << "," << n;
  os << "\n";
  for (int i = 0; i < spec.dim(); ++i) {
    os << names[i];
    for (int j = 0; j < spec.dim(); ++j) os << "," << fmt(std::abs(r(i, j)));
    os << "\n";
  }
  return os.str();
}

CMat heatmap_csv_parse(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line)) throw ConfigError("heatmap_csv_parse: empty input");
  std::vector<std::vector<double>> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    std::getline(ls, cell, ',');  // row label
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(std::move(row));
  }
  const size_t n = rows.size();
  CMat m(n, n);
  for (size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) throw ConfigError("heatmap_csv_parse: ragged rows");
    for (size_t j = 0; j < n; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

std::string heatmap_svg(const CMat& rho, const SectorSpectrum& spec,
                        const HeatmapStyle& style) {
  const CMat r = spec.transform.adjoint() * rho * spec.transform;
  const int n = spec.dim();
  const int cell = style.cell_px;
  const int margin = 46;
  const int size = n * cell;

  double vmax = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) vmax = std::max(vmax, std::abs(r(i, j)));
  if (vmax <= 0) vmax = 1.0;

  auto color = [&](double v) {
    double u;
    if (style.log_scale) {
      const double lf = std::log10(style.log_floor);
      u = v <= vmax * style.log_floor ? 0.0 : 1.0 - std::log10(v / vmax) / lf;
    } else {
      u = v / vmax;
    }
    u = std::min(std::max(u, 0.0), 1.0);
    // white -> blue -> dark
    const int rr = static_cast<int>(255 * (1.0 - 0.85 * u));
    const int gg = static_cast<int>(255 * (1.0 - 0.55 * u));
    const int bb = static_cast<int>(255 * (1.0 - 0.12 * u));
    char buf[16];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", rr, gg, bb);
    return std::string(buf);
  };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size + 2 * margin
     << "\" height=\"" << size + 2 * margin << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      os << "<rect x=\"" << margin + j * cell << "\" y=\"" << margin + i * cell
         << "\" width=\"" << cell << "\" height=\"" << cell << "\" fill=\""
         << color(std::abs(r(i, j))) << "\"/>\n";
  // sector boundaries
  int off = 0;
  for (int s = 0; s < spec.sector_count(); ++s) {
    const int d = spec.multiplicities[s];
    os << "<rect x=\"" << margin + off * cell << "\" y=\"" << margin + off * cell
       << "\" width=\"" << d * cell << "\" height=\"" << d * cell
       << "\" fill=\"none\" stroke=\"#c03030\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << margin + off * cell + 3 << "\" y=\"" << margin - 6
       << "\" font-size=\"11\" font-family=\"monospace\">q=" << fmt(spec.eigenvalues[s])
       << "</text>\n";
    off += d;
  }
  os << "<text x=\"4\" y=\"" << size + 2 * margin - 8
     << "\" font-size=\"11\" font-family=\"monospace\">max |rho_kl| = " << fmt(vmax)
     << (style.log_scale ? " (log scale)" : " (linear scale)") << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace symnoise
