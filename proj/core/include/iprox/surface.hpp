#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "iprox/splitting.hpp"

namespace iprox {

struct SurfaceSpec {
  double lg_min = 0.5;
  double lg_max = 12.0;
  int lg_steps = 24;
  double ratio_min = 0.01;
  double ratio_max = 1.0;
  int ratio_steps = 100;

  void validate() const;
};

/// Composite contraction factors over (L_g, mu/L_f) with L_f = 1 and each
/// algorithm at its optimal step. values[a](i, j) is the cell (L_g[i], ratio[j]).
struct SurfaceGrid {
  std::vector<double> L_g;
  std::vector<double> ratio;
  std::map<Algorithm, Eigen::MatrixXd> values;
  std::string tau_policy;
};

SurfaceGrid contractivity_surface(const SurfaceSpec& spec);

/// Long format: algorithm,L_g,ratio,value.
std::string surface_csv(const SurfaceGrid& grid);

/// 800x600 heatmap with a 16-step palette and the value = 1 contour.
std::string surface_svg(const SurfaceGrid& grid, Algorithm a);

}  // namespace iprox
