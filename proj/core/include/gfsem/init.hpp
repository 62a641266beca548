#pragma once

#include "gfsem/dec_time.hpp"

#include <string>

namespace gfsem {

struct ProjectionReport {
  std::string method;
  double kernel_residual = 0.0;  // interior max-norm of M^{-1} times the GF spatial residual
  double constraint_residual = 0.0;
  double deviation = 0.0;  // discrete L2 distance of (u, v) from the interpolated input
  double lambda = 0.5;
  long constraint_rows = 0;
  long rank = 0;
};

/**
 * Boundary pressure traces used to anchor the reconstructed pressure:
 * the exact solution's traces, or traces rebuilt from the discrete source
 * integrals so that they satisfy the compatibility relations exactly.
 */
enum class PressureTraces { exact, compatible };

/** Interior max-norm of M^{-1} R(q) for the given scheme at time t. */
double kernel_residual(const State& q, const ProblemSpec& problem, const SchemeConfig& cfg,
                       double t = 0.0);

/**
 * Marches u along x from its trace on x = x0 and v along y from its trace on
 * y = y0 using the prefix tables, then blends two integration paths for p.
 * Needs an exact steady solution with gradient.
 */
State line_by_line_projection(const ProblemSpec& problem, const GridPtr& grid, double lambda = 0.5,
                              ProjectionReport* report = nullptr);

/**
 * Mass-weighted least-squares projection of the interpolated velocities onto
 * the GF divergence constraint, solved as a minimum-norm problem with a
 * rank-revealing sparse QR. Pressure follows from the source integrals
 * anchored at the chosen boundary traces. If reference is given, it
 * replaces the interpolated exact velocities as the target.
 */
State optimization_projection(const ProblemSpec& problem, const GridPtr& grid,
                              const State* reference = nullptr, double lambda = 0.5,
                              ProjectionReport* report = nullptr,
                              PressureTraces traces = PressureTraces::compatible);

/** Evolves interpolated data for T_settle; T_settle = 0 returns the interpolation. */
State from_long_run(const ProblemSpec& problem, const SchemeConfig& scheme, const GridPtr& grid,
                    double T_settle, double cfl);

}  // namespace gfsem
