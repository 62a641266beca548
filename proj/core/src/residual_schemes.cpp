#include "gfsem/residual_schemes.hpp"

namespace gfsem {
namespace {

using Mat = Eigen::MatrixXd;

// Shorthand for the two operator families of a grid.
struct Ops {
  const OperatorSet1D& x;
  const OperatorSet1D& y;
  explicit Ops(const Grid2D& g) : x(g.ox()), y(g.oy()) {}
};

void require_nonperiodic(const Grid2D& g) {
  if (g.periodic())
    throw ConfigError("the global-flux formulation needs non-periodic integration lines");
}

Mat mass2(const Grid2D& g, const Mat& q) {
  return g.ox().mass_diag().asDiagonal() * q * g.oy().mass_diag().asDiagonal();
}

State make_state(const GridPtr& g, Mat u, Mat v, Mat p) {
  return State(Field(g, std::move(u)), Field(g, std::move(v)), Field(g, std::move(p)));
}

struct GFPieces {
  Mat G, pKu, pKv;
};

GFPieces gf_pieces(const State& q, const SourceFields& s) {
  const Grid2D& g = *q.grid();
  require_nonperiodic(g);
  const GFVars gf = compute_gf_vars(q, s);
  return {gf.Gp().values, q.p.values - gf.Ku.values, q.p.values - gf.Kv.values};
}

State galerkin_gf_from(const GridPtr& gp, const GFPieces& f) {
  Ops o(*gp);
  return make_state(gp, apply_xy(o.x.deriv(), o.y.mass(), f.pKu),
                    apply_xy(o.x.mass(), o.y.deriv(), f.pKv),
                    apply_xy(o.x.deriv(), o.y.deriv(), f.G));
}

State su_gf_space(const GridPtr& gp, const GFPieces& f, double tau) {
  Ops o(*gp);
  Mat ru = apply_xy(o.x.stiff(), o.y.deriv(), f.G);
  Mat rv = apply_xy(o.x.deriv(), o.y.stiff(), f.G);
  Mat rp = apply_xy(o.x.stiff(), o.y.mass(), f.pKu) + apply_xy(o.x.mass(), o.y.stiff(), f.pKv);
  return make_state(gp, tau * ru, tau * rv, tau * rp);
}

State su_standard_space(const State& q, const SourceFields& s, double tau) {
  const GridPtr& gp = q.grid();
  Ops o(*gp);
  const Mat& u = q.u.values;
  const Mat& v = q.v.values;
  const Mat& p = q.p.values;
  Mat ru = apply_xy(o.x.stiff(), o.y.mass(), u) + apply_xy(o.x.deriv_t(), o.y.deriv(), v) -
           apply_xy(o.x.deriv_t(), o.y.mass(), s.sp.values);
  Mat rv = apply_xy(o.x.deriv(), o.y.deriv_t(), u) + apply_xy(o.x.mass(), o.y.stiff(), v) -
           apply_xy(o.x.mass(), o.y.deriv_t(), s.sp.values);
  Mat rp = apply_xy(o.x.stiff(), o.y.mass(), p) - apply_xy(o.x.deriv_t(), o.y.mass(), s.su.values) +
           apply_xy(o.x.mass(), o.y.stiff(), p) - apply_xy(o.x.mass(), o.y.deriv_t(), s.sv.values);
  return make_state(gp, tau * ru, tau * rv, tau * rp);
}

State oss_gf_space(const GridPtr& gp, const GFPieces& f, double tau) {
  Ops o(*gp);
  Mat ru = apply_xy(o.x.oss_z(), o.y.deriv(), f.G);
  Mat rv = apply_xy(o.x.deriv(), o.y.oss_z(), f.G);
  Mat rp = apply_xy(o.x.oss_z(), o.y.mass(), f.pKu) + apply_xy(o.x.mass(), o.y.oss_z(), f.pKv);
  return make_state(gp, tau * ru, tau * rv, tau * rp);
}

State oss_standard_space(const State& q, double tau) {
  const GridPtr& gp = q.grid();
  Ops o(*gp);
  Mat ru = apply_xy(o.x.oss_z(), o.y.mass(), q.u.values);
  Mat rv = apply_xy(o.x.mass(), o.y.oss_z(), q.v.values);
  Mat rp = apply_xy(o.x.oss_z(), o.y.mass(), q.p.values) +
           apply_xy(o.x.mass(), o.y.oss_z(), q.p.values);
  return make_state(gp, tau * ru, tau * rv, tau * rp);
}

}  // namespace

double SchemeConfig::default_alpha(Stabilization s, int K) {
  switch (s) {
    case Stabilization::su: return K <= 5 ? 0.05 : 0.02;
    case Stabilization::oss: return K <= 2 ? 0.01 : 0.04;
    case Stabilization::none: return 0.0;
  }
  return 0.0;
}

SchemeConfig SchemeConfig::make(Formulation f, Stabilization s, const Grid2D& g) {
  SchemeConfig c;
  c.formulation = f;
  c.stabilization = s;
  c.alpha = default_alpha(s, g.degree());
  c.h = g.h();
  return c;
}

State galerkin_standard(const State& q, const SourceFields& s) {
  const GridPtr& gp = q.grid();
  Ops o(*gp);
  Mat ru = apply_xy(o.x.deriv(), o.y.mass(), q.p.values) - mass2(*gp, s.su.values);
  Mat rv = apply_xy(o.x.mass(), o.y.deriv(), q.p.values) - mass2(*gp, s.sv.values);
  Mat rp = apply_xy(o.x.deriv(), o.y.mass(), q.u.values) +
           apply_xy(o.x.mass(), o.y.deriv(), q.v.values) - mass2(*gp, s.sp.values);
  return make_state(gp, std::move(ru), std::move(rv), std::move(rp));
}

State galerkin_gf(const State& q, const SourceFields& s) {
  return galerkin_gf_from(q.grid(), gf_pieces(q, s));
}

State su_time_term(const State& dq, const SchemeConfig& cfg) {
  const GridPtr& gp = dq.grid();
  Ops o(*gp);
  const double tau = cfg.tau();
  Mat tu = apply_xy(o.x.deriv_t(), o.y.mass(), dq.p.values);
  Mat tv = apply_xy(o.x.mass(), o.y.deriv_t(), dq.p.values);
  Mat tp = apply_xy(o.x.deriv_t(), o.y.mass(), dq.u.values) +
           apply_xy(o.x.mass(), o.y.deriv_t(), dq.v.values);
  return make_state(gp, tau * tu, tau * tv, tau * tp);
}

SUParts stab_su(const State& q, const SourceFields& s, const SchemeConfig& cfg, const State& dq) {
  SUParts out;
  out.time = su_time_term(dq, cfg);
  if (cfg.formulation == Formulation::global_flux)
    out.space = su_gf_space(q.grid(), gf_pieces(q, s), cfg.tau());
  else
    out.space = su_standard_space(q, s, cfg.tau());
  return out;
}

State stab_oss(const State& q, const SourceFields& s, const SchemeConfig& cfg) {
  if (cfg.formulation == Formulation::global_flux)
    return oss_gf_space(q.grid(), gf_pieces(q, s), cfg.tau());
  return oss_standard_space(q, cfg.tau());
}

State spatial_residual(const State& q, const SourceFields& s, const SchemeConfig& cfg) {
  const GridPtr& gp = q.grid();
  if (cfg.formulation == Formulation::global_flux) {
    const GFPieces f = gf_pieces(q, s);
    State r = galerkin_gf_from(gp, f);
    if (cfg.stabilization == Stabilization::su) r += su_gf_space(gp, f, cfg.tau());
    if (cfg.stabilization == Stabilization::oss) r += oss_gf_space(gp, f, cfg.tau());
    return r;
  }
  State r = galerkin_standard(q, s);
  if (cfg.stabilization == Stabilization::su) r += su_standard_space(q, s, cfg.tau());
  if (cfg.stabilization == Stabilization::oss) r += oss_standard_space(q, cfg.tau());
  return r;
}

ResidualParts residual_parts(const State& q, const SourceFields& s, const SchemeConfig& cfg,
                             const State& dq) {
  ResidualParts parts;
  parts.galerkin = cfg.formulation == Formulation::global_flux ? galerkin_gf(q, s)
                                                               : galerkin_standard(q, s);
  parts.stab_time = State(q.grid());
  parts.stab_space = State(q.grid());
  if (cfg.stabilization == Stabilization::su) {
    SUParts su = stab_su(q, s, cfg, dq);
    parts.stab_time = std::move(su.time);
    parts.stab_space = std::move(su.space);
  } else if (cfg.stabilization == Stabilization::oss) {
    parts.stab_space = stab_oss(q, s, cfg);
  }
  return parts;
}

State sample_state(const GridPtr& grid, const StateFn& f, double t) {
  State s(grid);
  for (int a = 0; a < grid->nx(); ++a)
    for (int b = 0; b < grid->ny(); ++b) {
      const auto q = f(grid->x()[a], grid->y()[b], t);
      s.u(a, b) = q[0];
      s.v(a, b) = q[1];
      s.p(a, b) = q[2];
    }
  return s;
}

void apply_boundary_conditions(State& residual, State& state, BoundaryMode mode,
                               const StateFn& exact, double t) {
  if (mode != BoundaryMode::dirichlet_exact) return;
  if (!exact) throw ConfigError("dirichlet boundary conditions need an exact solution");
  const Grid2D& g = *state.grid();
  const int nx = g.nx(), ny = g.ny();
  auto pin = [&](int a, int b) {
    const auto q = exact(g.x()[a], g.y()[b], t);
    state.u(a, b) = q[0];
    state.v(a, b) = q[1];
    state.p(a, b) = q[2];
    residual.u(a, b) = residual.v(a, b) = residual.p(a, b) = 0.0;
  };
  for (int a = 0; a < nx; ++a) {
    pin(a, 0);
    pin(a, ny - 1);
  }
  for (int b = 1; b < ny - 1; ++b) {
    pin(0, b);
    pin(nx - 1, b);
  }
}

std::string to_string(Formulation f) {
  return f == Formulation::global_flux ? "gf" : "standard";
}

std::string to_string(Stabilization s) {
  switch (s) {
    case Stabilization::su: return "su";
    case Stabilization::oss: return "oss";
    case Stabilization::none: return "none";
  }
  return "none";
}

std::string to_string(BoundaryMode b) {
  switch (b) {
    case BoundaryMode::periodic: return "periodic";
    case BoundaryMode::dirichlet_exact: return "dirichlet";
    case BoundaryMode::neumann: return "neumann";
  }
  return "neumann";
}

}  // namespace gfsem
