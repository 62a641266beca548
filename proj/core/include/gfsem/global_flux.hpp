#pragma once

#include "gfsem/tensor_field.hpp"

namespace gfsem {

/** Nodal source values S_u, S_v, S_p on the grid. */
struct SourceFields {
  Field su, sv, sp;

  SourceFields() = default;
  explicit SourceFields(const GridPtr& g) : su(g), sv(g), sp(g) {}
};

/** Integrated GF quantities; each vanishes where its integration starts. */
struct GFVars {
  Field U;   // (1 kron I_y) u
  Field V;   // (I_x kron 1) v
  Field Ku;  // (I_x kron 1) S_u
  Field Kv;  // (1 kron I_y) S_v
  Field Kp;  // (I_x kron I_y) S_p

  /** G_p = U + V - Kp, the quantity whose mixed derivative is the GF divergence. */
  Field Gp() const { return U + V - Kp; }
};

GFVars compute_gf_vars(const State& state, const SourceFields& src);

/** (D_x kron D_y)(U + V - Kp). */
Field gf_divergence(const GFVars& gf);

/** Integrated steady residuals over the GL subcells anchored at the lower-left cell corner. */
struct SubcellResiduals {
  Eigen::MatrixXd phi_u;  // int_{x_{i,0}}^{x_{i,s}} (dx p - S_u)(x, y_t) dx
  Eigen::MatrixXd phi_v;  // int_{y_{j,0}}^{y_{j,t}} (dy p - S_v)(x_s, y) dy
  Eigen::MatrixXd phi_p;  // double integral of dx u + dy v - S_p
};

/** Throws std::out_of_range for an invalid cell index. */
SubcellResiduals subcell_residuals(const State& state, const SourceFields& src, int i, int j);

}  // namespace gfsem
