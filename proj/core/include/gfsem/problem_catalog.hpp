#pragma once

#include "gfsem/residual_schemes.hpp"

#include <map>
#include <string>

namespace gfsem {

using SpaceTimeFn = std::function<double(double, double, double)>;

/** S_v = c v_perp - f v + tau with v_perp = (v, -u); S_p may depend on time. */
struct SourceSpec {
  ScalarFn c, f, tau_u, tau_v;
  SpaceTimeFn sp;
  bool sp_time_dependent = false;
};

struct ExactGradient {
  double ux, uy, vx, vy, px, py;
};
using GradientFn = std::function<ExactGradient(double, double, double)>;

struct ProblemSpec {
  std::string name;
  Box domain;
  SourceSpec sources;
  StateFn exact;        // empty when no closed form is known
  GradientFn gradient;  // spatial gradient of the exact solution
  BoundaryMode bc = BoundaryMode::neumann;
  bool steady = true;
  std::map<std::string, double> params;

  bool has_exact() const { return static_cast<bool>(exact); }
  /** Component 0, 1, 2 (u, v, p) of the exact solution frozen at time t. */
  ScalarFn exact_component(int comp, double t = 0.0) const;
};

/** Nodal source evaluation bound to one grid; coefficient fields are cached. */
class SourceEvaluator {
public:
  SourceEvaluator(const ProblemSpec& problem, GridPtr grid);
  SourceFields operator()(const State& q, double t) const;

private:
  GridPtr grid_;
  SpaceTimeFn sp_fn_;
  bool sp_dynamic_;
  Eigen::MatrixXd c_, f_, tau_u_, tau_v_, sp_static_;
};

struct StommelCoefficients {
  double lambda, b, c0, c1, f, F;
  double alpha, gamma, A, B, k, w;
};

/** Throws std::invalid_argument for f <= 0 or coincident exponentials. */
StommelCoefficients stommel_coefficients(double lambda, double b, double c0, double c1, double f,
                                         double F);

ProblemSpec coriolis_vortex(double c = 0.2, double P0 = 1.0);
ProblemSpec mass_source_steady(double a = 1.0, double b = 1.0, double x0 = 0.5, double y0 = 0.5,
                               double x1 = 0.65, double y1 = 0.39, double p0 = 1.0);
ProblemSpec mass_source_translating(double ax = -0.1, double ay = 0.1, double b = 0.001,
                                    double p0 = 1.0, double x1 = 0.65, double y1 = 0.39);
ProblemSpec stommel_gyre(double lambda = 1.0, double b = 1.0, double c0 = 0.01, double c1 = 0.01,
                         double f = 0.01, double F = 0.1);

/** Source-free system on a periodic box; no exact solution attached. */
ProblemSpec homogeneous_periodic(Box domain = {});

/** Looks a catalog entry up by name with default parameters overridden by params. */
ProblemSpec make_problem(const std::string& name, const std::map<std::string, double>& params = {});

/** Compactly supported bump of height eps centred at (xc, yc) with radius r0. */
ScalarFn pressure_perturbation(double eps, double xc = 0.4, double yc = 0.43, double r0 = 0.1);

/**
 * Max PDE residual of the exact solution at random interior points using
 * fourth-order central differences; time derivatives are included for
 * unsteady problems.
 */
double pde_residual_check(const ProblemSpec& problem, int points = 100, unsigned seed = 7,
                          double step = 1e-5, double t = 0.0);

}  // namespace gfsem
