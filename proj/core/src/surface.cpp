#include "iprox/surface.hpp"

#include <algorithm>
#include <array>
#include <sstream>

#include "iprox/errors.hpp"
#include "iprox/format.hpp"

namespace iprox {

namespace {

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[i] = n == 1 ? a : a + (b - a) * i / (n - 1);
  return v;
}

// Sixteen samples of the viridis colormap.
constexpr std::array<const char*, 16> kPalette = {
    "#440154", "#481a6c", "#472f7d", "#414487", "#39568c", "#31688e", "#2a788e", "#23888e",
    "#1f988b", "#22a884", "#35b779", "#54c568", "#7ad151", "#a5db36", "#d2e21b", "#fde725"};

// Values in [0, 2] map onto the palette; anything larger saturates.
const char* colour(double v) {
  const double t = std::clamp(v / 2.0, 0.0, 1.0);
  const int i = std::min(15, static_cast<int>(t * 16.0));
  return kPalette[static_cast<std::size_t>(i)];
}

}  // namespace

void SurfaceSpec::validate() const {
  require(lg_min >= 0.5 && lg_max <= 12.0 && lg_min <= lg_max, "L_g grid must lie in [0.5, 12]");
  require(ratio_min > 0 && ratio_max <= 1.0 && ratio_min <= ratio_max,
          "mu/L_f grid must lie in (0, 1]");
  require(lg_steps >= 1 && ratio_steps >= 1, "grid sizes must be positive");
}

SurfaceGrid contractivity_surface(const SurfaceSpec& spec) {
  spec.validate();
  SurfaceGrid g;
  g.L_g = linspace(spec.lg_min, spec.lg_max, spec.lg_steps);
  g.ratio = linspace(spec.ratio_min, spec.ratio_max, spec.ratio_steps);
  g.tau_policy = "fb: 2/(mu+L_f); pr, dr: 1/sqrt(mu L_f); L_f = 1";
  for (Algorithm a : {Algorithm::fb, Algorithm::pr, Algorithm::dr}) {
    Eigen::MatrixXd m(spec.lg_steps, spec.ratio_steps);
    for (int j = 0; j < spec.ratio_steps; ++j) {
      const double mu = g.ratio[j];
      const double tau = optimal_tau(a, mu, 1.0);
      for (int i = 0; i < spec.lg_steps; ++i) m(i, j) = contraction_factor(a, g.L_g[i], mu, 1.0, tau);
    }
    g.values.emplace(a, std::move(m));
  }
  return g;
}

std::string surface_csv(const SurfaceGrid& grid) {
  std::ostringstream os;
  os << "algorithm,L_g,ratio,value\n";
  for (const auto& [a, m] : grid.values) {
    for (std::size_t i = 0; i < grid.L_g.size(); ++i) {
      for (std::size_t j = 0; j < grid.ratio.size(); ++j) {
        os << to_string(a) << ',' << fmt17(grid.L_g[i]) << ',' << fmt17(grid.ratio[j]) << ','
           << fmt17(m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))) << '\n';
      }
    }
  }
  return os.str();
}

std::string surface_svg(const SurfaceGrid& grid, Algorithm a) {
  const auto it = grid.values.find(a);
  require(it != grid.values.end(), "surface has no values for this algorithm");
  const Eigen::MatrixXd& m = it->second;
  const double x0 = 80, y0 = 40, w = 640, h = 500;
  const auto rows = m.rows(), cols = m.cols();
  const double cw = w / static_cast<double>(cols), ch = h / static_cast<double>(rows);
  auto cx = [&](Eigen::Index j) { return x0 + cw * static_cast<double>(j); };
  // Row 0 (smallest L_g) at the bottom.
  auto cy = [&](Eigen::Index i) { return y0 + h - ch * static_cast<double>(i + 1); };

  std::ostringstream os;
  os.precision(6);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" "
        "viewBox=\"0 0 800 600\">\n";
  os << "<rect width=\"800\" height=\"600\" fill=\"white\"/>\n";
  os << "<text x=\"400\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        "font-size=\"16\">"
     << to_string(a) << " contraction factor</text>\n";
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      os << "<rect x=\"" << cx(j) << "\" y=\"" << cy(i) << "\" width=\"" << cw << "\" height=\""
         << ch << "\" fill=\"" << colour(m(i, j)) << "\"/>\n";
    }
  }
  // Contour: edges between cells on opposite sides of 1.
  os << "<g stroke=\"red\" stroke-width=\"2\">\n";
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      const bool in = m(i, j) < 1.0;
      if (j + 1 < cols && in != (m(i, j + 1) < 1.0)) {
        os << "<line x1=\"" << cx(j + 1) << "\" y1=\"" << cy(i) << "\" x2=\"" << cx(j + 1)
           << "\" y2=\"" << cy(i) + ch << "\"/>\n";
      }
      if (i + 1 < rows && in != (m(i + 1, j) < 1.0)) {
        os << "<line x1=\"" << cx(j) << "\" y1=\"" << cy(i) << "\" x2=\"" << cx(j) + cw
           << "\" y2=\"" << cy(i) << "\"/>\n";
      }
    }
  }
  os << "</g>\n";
  os << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<text x=\"400\" y=\"580\" text-anchor=\"middle\">mu / L_f</text>\n";
  os << "<text x=\"20\" y=\"290\" transform=\"rotate(-90 20 290)\" text-anchor=\"middle\">L_g</text>\n";
  os << "<text x=\"" << x0 << "\" y=\"" << y0 + h + 16 << "\">" << grid.ratio.front() << "</text>\n";
  os << "<text x=\"" << x0 + w << "\" y=\"" << y0 + h + 16 << "\" text-anchor=\"end\">"
     << grid.ratio.back() << "</text>\n";
  os << "<text x=\"" << x0 - 6 << "\" y=\"" << y0 + h << "\" text-anchor=\"end\">"
     << grid.L_g.front() << "</text>\n";
  os << "<text x=\"" << x0 - 6 << "\" y=\"" << y0 + 12 << "\" text-anchor=\"end\">"
     << grid.L_g.back() << "</text>\n";
  for (int k = 0; k < 16; ++k) {
    os << "<rect x=\"740\" y=\"" << 40 + (15 - k) * 20 << "\" width=\"20\" height=\"20\" fill=\""
       << kPalette[static_cast<std::size_t>(k)] << "\"/>\n";
  }
  os << "<text x=\"764\" y=\"54\">2+</text>\n<text x=\"764\" y=\"354\">0</text>\n";
  os << "</g>\n</svg>\n";
  return os.str();
}

}  // namespace iprox
