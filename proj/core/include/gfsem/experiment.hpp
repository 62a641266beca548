#pragma once

#include "gfsem/config.hpp"
#include "gfsem/init.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace gfsem {

struct ConvergenceRow {
  int N = 0;
  double err_u = 0, err_v = 0, err_p = 0;  // discrete L2
  double ord_u = NAN, ord_v = NAN, ord_p = NAN;
  double max_u = 0, max_v = 0, max_p = 0;  // nodal max-norm
  double mord_u = NAN, mord_v = NAN, mord_p = NAN;
  bool blew_up = false;
};

struct TimeSample {
  double t;
  double value;
};

/** L2 norm (outer node ring excluded) of M^{-1} times the scheme's weak divergence minus source. */
double divergence_norm(const State& q, const SourceFields& s, Formulation f);

/** Builds the initial state requested by cfg on one grid. */
State initial_state(const ExperimentConfig& cfg, const ProblemSpec& problem, const GridPtr& grid,
                    ProjectionReport* report = nullptr);

GridPtr grid_for(const ExperimentConfig& cfg, const ProblemSpec& problem, int mesh_index);

/** Fills ord_* columns from consecutive rows. */
void compute_orders(std::vector<ConvergenceRow>& rows);

/** Evolves every mesh to T and compares with the exact solution; meshes run on up to `threads` workers. */
std::vector<ConvergenceRow> run_convergence(const ExperimentConfig& cfg, int threads = 1);

/** GF or standard divergence norm after each sample interval on the first mesh. */
std::vector<TimeSample> run_divergence_tracking(const ExperimentConfig& cfg);

struct PerturbationResult {
  State equilibrium;
  State final_state;
  std::vector<TimeSample> max_difference;  // max |v - v_eq| over the grid
  std::vector<std::pair<double, Field>> snapshots;  // |v - v_eq| fields at sample times
};

/** Adds the pressure bump to the initializer's equilibrium and evolves to T on the first mesh. */
PerturbationResult run_perturbation(const ExperimentConfig& cfg);

struct SolveResult {
  State final_state;
  std::vector<TimeSample> divergence;
  long steps = 0;
};
SolveResult run_solve(const ExperimentConfig& cfg);

// Output helpers.
void ensure_writable_dir(const std::string& dir);
void write_convergence_csv(const std::string& path, const std::vector<ConvergenceRow>& rows,
                           bool max_norm = false);
std::vector<ConvergenceRow> read_convergence_csv(const std::string& path);
void write_series_csv(const std::string& path, const std::string& value_name,
                      const std::vector<TimeSample>& series);
void write_manifest(const std::string& dir, const ExperimentConfig& cfg, const std::string& command,
                    double wall_seconds, const std::string& extra = {});
std::string git_describe();

}  // namespace gfsem
