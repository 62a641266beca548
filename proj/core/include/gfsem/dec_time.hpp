#pragma once

#include "gfsem/problem_catalog.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gfsem {

/** Raised when the solution stops being finite. */
struct BlowUpError : std::runtime_error {
  BlowUpError(const std::string& what, long step_index)
      : std::runtime_error(what), step(step_index) {}
  long step;
};

struct DeCConfig {
  int M = 1;                // subintervals; M+1 Gauss-Lobatto subnodes
  int kappa = 2;            // correction sweeps
  Eigen::VectorXd beta;     // subnode positions in [0,1]
  Eigen::MatrixXd theta;    // theta(m,r) = int_0^{beta_m} gamma_r
  double cfl = 0.1;

  /** 0.1 for K <= 5, otherwise 1/(2(2K+1)). */
  static double default_cfl(int K);
  /** M = ceil((K+1)/2), kappa = K+1, default cfl. */
  static DeCConfig for_degree(int K);
  static DeCConfig make(int M, int kappa, double cfl);
};

/**
 * One DeC step for a system exposing
 *   Vec residual(const Vec& q, double t)     spatial terms R, with M dq/dt + R = 0
 *   Vec stab_time(const Vec& dq)             increment operator of the stabilization
 *   Vec mass_inv(const Vec& r)
 *   void pin(Vec& q, double t)               strong boundary values
 *   static bool finite(const Vec& q)
 * Vec must support +, -, and scalar *.
 */
template <class System, class Vec>
Vec dec_step(System& sys, const Vec& q0, double t, double dt, const DeCConfig& cfg) {
  const int M = cfg.M;
  std::vector<Vec> prev(M + 1, q0), next(M + 1, q0);
  std::vector<Vec> R(M + 1);
  R[0] = sys.residual(q0, t);
  for (int k = 0; k < cfg.kappa; ++k) {
    for (int r = 1; r <= M; ++r) R[r] = sys.residual(prev[r], t + cfg.beta[r] * dt);
    for (int m = 1; m <= M; ++m) {
      Vec rhs = sys.stab_time(prev[m] - q0);
      for (int r = 0; r <= M; ++r)
        if (cfg.theta(m, r) != 0.0) rhs = rhs + (dt * cfg.theta(m, r)) * R[r];
      next[m] = q0 - sys.mass_inv(rhs);
      sys.pin(next[m], t + cfg.beta[m] * dt);
    }
    std::swap(prev, next);
  }
  return prev[M];
}

/** Per-step observer: (step index, time, state). */
template <class Vec>
using StepCallback = std::function<void(long, double, const Vec&)>;

/**
 * Fixed-step loop to exactly T; the last step is shortened when T is not a
 * multiple of dt. Throws BlowUpError on non-finite values.
 */
template <class System, class Vec>
Vec run_dec(System& sys, Vec q, double T, double dt, const DeCConfig& cfg,
            const StepCallback<Vec>& on_step = {}) {
  if (!(T > 0.0)) throw std::invalid_argument("final time must be positive");
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  const long full = static_cast<long>(std::floor(T / dt * (1.0 + 1e-12)));
  const double rest = T - full * dt;
  const long steps = full + (rest > 1e-12 * T ? 1 : 0);
  sys.pin(q, 0.0);
  double t = 0.0;
  for (long n = 0; n < steps; ++n) {
    const double h = (n < full) ? dt : rest;
    q = dec_step(sys, q, t, h, cfg);
    t = (n + 1 < steps) ? (n + 1) * dt : T;
    if (!System::finite(q))
      throw BlowUpError("non-finite state after step " + std::to_string(n + 1) + " at t=" +
                            std::to_string(t),
                        n + 1);
    if (on_step) on_step(n + 1, t, q);
  }
  return q;
}

/** Spatial discretization of a catalog problem, shaped for the DeC engine. */
class AcousticSystem {
public:
  AcousticSystem(const ProblemSpec& problem, GridPtr grid, SchemeConfig scheme);

  State residual(const State& q, double t);
  State stab_time(const State& dq);
  State mass_inv(const State& r) const;
  void pin(State& q, double t) const;
  /**
   * Pins Dirichlet nodes to the boundary ring of q instead of the exact
   * solution. Meant for steady problems, whose discrete equilibria carry
   * their own boundary values.
   */
  void freeze_boundary(const State& q) { frozen_ = q; has_frozen_ = true; }
  static bool finite(const State& q) { return q.all_finite(); }

  SourceFields sources(const State& q, double t) const { return sources_(q, t); }
  const SchemeConfig& scheme() const { return scheme_; }
  const GridPtr& grid() const { return grid_; }
  const ProblemSpec& problem() const { return problem_; }
  long residual_evaluations() const { return evaluations_; }

private:
  void zero_boundary_rows(State& r) const;

  ProblemSpec problem_;
  GridPtr grid_;
  SchemeConfig scheme_;
  SourceEvaluator sources_;
  long evaluations_ = 0;
  State frozen_;
  bool has_frozen_ = false;
};

/** dt = cfl * h / c with wave speed c = 1. */
inline double time_step(const Grid2D& g, double cfl) { return cfl * g.h(); }

}  // namespace gfsem
