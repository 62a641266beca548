#include "gfsem/global_flux.hpp"

#include <stdexcept>

namespace gfsem {

GFVars compute_gf_vars(const State& state, const SourceFields& src) {
  const GridPtr& g = state.grid();
  GFVars gf;
  gf.U = Field(g, prefix_y(*g, state.u.values));
  gf.V = Field(g, prefix_x(*g, state.v.values));
  gf.Ku = Field(g, prefix_x(*g, src.su.values));
  gf.Kv = Field(g, prefix_y(*g, src.sv.values));
  gf.Kp = Field(g, prefix_x(*g, prefix_y(*g, src.sp.values)));
  return gf;
}

Field gf_divergence(const GFVars& gf) {
  const Grid2D& g = *gf.U.grid;
  return Field(gf.U.grid, apply_xy(g.ox().deriv(), g.oy().deriv(), gf.Gp().values));
}

SubcellResiduals subcell_residuals(const State& state, const SourceFields& src, int i, int j) {
  const Grid2D& g = *state.grid();
  if (i < 0 || j < 0 || i >= g.Nx() || j >= g.Ny())
    throw std::out_of_range("subcell_residuals: cell index out of range");
  const int K = g.degree();
  const int n = K + 1;
  const Eigen::MatrixXd& Ix = g.ox().local().integ;
  const Eigen::MatrixXd& Iy = g.oy().local().integ;

  const auto u = state.u.values.block(i * K, j * K, n, n);
  const auto v = state.v.values.block(i * K, j * K, n, n);
  const auto p = state.p.values.block(i * K, j * K, n, n);
  const auto su = src.su.values.block(i * K, j * K, n, n);
  const auto sv = src.sv.values.block(i * K, j * K, n, n);
  const auto sp = src.sp.values.block(i * K, j * K, n, n);

  Eigen::MatrixXd du = u;
  for (int s = 0; s < n; ++s) du.row(s) -= u.row(0);
  Eigen::MatrixXd dv = v;
  for (int t = 0; t < n; ++t) dv.col(t) -= v.col(0);
  Eigen::MatrixXd dpx = p;
  for (int s = 0; s < n; ++s) dpx.row(s) -= p.row(0);
  Eigen::MatrixXd dpy = p;
  for (int t = 0; t < n; ++t) dpy.col(t) -= p.col(0);

  SubcellResiduals r;
  r.phi_p = du * Iy.transpose() + Ix * dv - Ix * sp * Iy.transpose();
  r.phi_u = dpx - Ix * su;
  r.phi_v = dpy - sv * Iy.transpose();
  return r;
}

}  // namespace gfsem
