#pragma once

#include "gfsem/residual_schemes.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace gfsem {

/**
 * Run description parsed from a flat "dotted.key = value" text file.
 * Blank lines and lines starting with '#' are ignored.
 */
struct ExperimentConfig {
  std::string problem = "coriolis_vortex";
  std::map<std::string, double> problem_params;

  Formulation formulation = Formulation::global_flux;
  Stabilization stabilization = Stabilization::su;
  std::optional<double> alpha;

  int K = 2;
  std::vector<std::pair<int, int>> meshes{{10, 10}};
  std::optional<double> cfl;
  double T = 1.0;
  double sample_interval = 0.0;  // in time units; 0 samples every step

  std::string init_method = "interpolate";  // interpolate|line_by_line|optimize|long_run|from_file
  double init_lambda = 0.5;
  double settle_time = 0.0;
  std::string init_file;

  bool perturb = false;
  double eps = 1e-2, px = 0.4, py = 0.43, r0 = 0.1;

  std::string output_dir = "out";
  bool track_divergence = false;

  /** Every key/value as read, sorted by key, for manifests. */
  std::map<std::string, std::string> raw;

  static ExperimentConfig parse(const std::string& text);
  static ExperimentConfig load(const std::string& path);

  double cfl_value() const;
  SchemeConfig scheme_for(const Grid2D& g) const;
};

Formulation parse_formulation(const std::string& s);
Stabilization parse_stabilization(const std::string& s);

}  // namespace gfsem
