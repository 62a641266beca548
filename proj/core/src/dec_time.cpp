#include "gfsem/dec_time.hpp"

namespace gfsem {

double DeCConfig::default_cfl(int K) { return K <= 5 ? 0.1 : 1.0 / (2.0 * (2.0 * K + 1.0)); }

DeCConfig DeCConfig::make(int M, int kappa, double cfl) {
  if (M < 1 || kappa < 1) throw std::invalid_argument("DeC needs M >= 1 and kappa >= 1");
  DeCConfig c;
  c.M = M;
  c.kappa = kappa;
  c.cfl = cfl;
  const GaussLobattoRule rule = gauss_lobatto_rule(M);
  c.beta = rule.nodes;
  c.theta = integration_table(rule);
  return c;
}

DeCConfig DeCConfig::for_degree(int K) {
  if (K < 1) throw std::invalid_argument("invalid polynomial degree");
  return make((K + 2) / 2, K + 1, default_cfl(K));
}

AcousticSystem::AcousticSystem(const ProblemSpec& problem, GridPtr grid, SchemeConfig scheme)
    : problem_(problem), grid_(std::move(grid)), scheme_(scheme), sources_(problem_, grid_) {
  if (problem_.bc == BoundaryMode::dirichlet_exact && !problem_.exact)
    throw ConfigError("dirichlet boundary conditions need an exact solution");
  if (problem_.bc == BoundaryMode::periodic && !grid_->periodic())
    throw ConfigError("periodic boundary mode needs a periodic grid");
  if (grid_->periodic() && scheme_.formulation == Formulation::global_flux)
    throw ConfigError("the global-flux formulation is not available on periodic grids");
}

void AcousticSystem::zero_boundary_rows(State& r) const {
  if (problem_.bc != BoundaryMode::dirichlet_exact) return;
  for (Field* f : {&r.u, &r.v, &r.p}) {
    Eigen::MatrixXd& m = f->values;
    m.row(0).setZero();
    m.row(m.rows() - 1).setZero();
    m.col(0).setZero();
    m.col(m.cols() - 1).setZero();
  }
}

State AcousticSystem::residual(const State& q, double t) {
  ++evaluations_;
  State r = spatial_residual(q, sources_(q, t), scheme_);
  zero_boundary_rows(r);
  return r;
}

State AcousticSystem::stab_time(const State& dq) {
  if (scheme_.stabilization != Stabilization::su) return State(grid_);
  State r = su_time_term(dq, scheme_);
  zero_boundary_rows(r);
  return r;
}

State AcousticSystem::mass_inv(const State& r) const {
  const Grid2D& g = *grid_;
  return State(Field(grid_, apply_mass_inv(g, r.u.values)), Field(grid_, apply_mass_inv(g, r.v.values)),
               Field(grid_, apply_mass_inv(g, r.p.values)));
}

void AcousticSystem::pin(State& q, double t) const {
  if (problem_.bc != BoundaryMode::dirichlet_exact) return;
  if (has_frozen_) {
    for (auto [dst, src] : {std::pair{&q.u, &frozen_.u}, {&q.v, &frozen_.v}, {&q.p, &frozen_.p}}) {
      Eigen::MatrixXd& m = dst->values;
      const Eigen::MatrixXd& f = src->values;
      const Eigen::Index r = m.rows() - 1, c = m.cols() - 1;
      m.row(0) = f.row(0);
      m.row(r) = f.row(r);
      m.col(0) = f.col(0);
      m.col(c) = f.col(c);
    }
    return;
  }
  State dummy(grid_);
  apply_boundary_conditions(dummy, q, problem_.bc, problem_.exact, t);
}

}  // namespace gfsem
