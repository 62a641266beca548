#pragma once

#include "gfsem/global_flux.hpp"

#include <array>
#include <functional>
#include <stdexcept>
#include <string>

namespace gfsem {

enum class Formulation { standard, global_flux };
enum class Stabilization { none, su, oss };
enum class BoundaryMode { periodic, dirichlet_exact, neumann };

/** Raised for inconsistent or incomplete run configuration. */
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SchemeConfig {
  Formulation formulation = Formulation::global_flux;
  Stabilization stabilization = Stabilization::su;
  double alpha = 0.0;
  double h = 0.0;

  double tau() const { return alpha * h; }

  /** SU: 0.05 for K <= 5, else 0.02. OSS: 0.01 for K <= 2, else 0.04. */
  static double default_alpha(Stabilization s, int K);
  static SchemeConfig make(Formulation f, Stabilization s, const Grid2D& g);
};

/** Spatial terms split the way the time integrator consumes them. */
struct ResidualParts {
  State galerkin;
  State stab_time;  // SU increment operator applied to (q^m - q^0); zero for OSS
  State stab_space;
};

/** Galerkin terms without the mass-times-time-derivative part. */
State galerkin_standard(const State& q, const SourceFields& s);
State galerkin_gf(const State& q, const SourceFields& s);

/** SU increment operator: the coefficient of d/dt in the SU terms, applied to dq. */
State su_time_term(const State& dq, const SchemeConfig& cfg);

struct SUParts {
  State time;
  State space;
};
/** SU (or SU-GF) stabilization; the time part is applied to the increment dq. */
SUParts stab_su(const State& q, const SourceFields& s, const SchemeConfig& cfg, const State& dq);

/** OSS (or OSS-GF) stabilization in Z-matrix form. */
State stab_oss(const State& q, const SourceFields& s, const SchemeConfig& cfg);

/** Galerkin plus space part of the stabilization, sharing one GF evaluation. */
State spatial_residual(const State& q, const SourceFields& s, const SchemeConfig& cfg);

ResidualParts residual_parts(const State& q, const SourceFields& s, const SchemeConfig& cfg,
                             const State& dq);

/** Exact (u, v, p) at (x, y, t). */
using StateFn = std::function<std::array<double, 3>(double, double, double)>;

/** Samples an exact solution on the grid at time t. */
State sample_state(const GridPtr& grid, const StateFn& f, double t);

/**
 * dirichlet_exact zeroes residual rows on boundary nodes and pins the
 * boundary values of the state to the exact solution at t. The other modes
 * leave both untouched (periodicity lives in the operators).
 */
void apply_boundary_conditions(State& residual, State& state, BoundaryMode mode,
                               const StateFn& exact, double t);

std::string to_string(Formulation f);
std::string to_string(Stabilization s);
std::string to_string(BoundaryMode b);

}  // namespace gfsem
