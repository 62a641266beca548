#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <vector>

namespace gfsem {

/** Row-major sparse matrix acting along one grid direction. */
using LineOp = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/** Gauss-Lobatto nodes and weights on the reference element [0,1]. */
struct GaussLobattoRule {
  int degree = 0;
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
  /** Barycentric weights of the cardinal polynomials. */
  Eigen::VectorXd bary;
};

/** Throws std::invalid_argument for K < 1. */
GaussLobattoRule gauss_lobatto_rule(int K);

/** Cardinal polynomial phi_p and its derivative on [0,1]; exact for any real x. */
double lagrange_eval(const GaussLobattoRule& rule, int p, double x);
double lagrange_deriv(const GaussLobattoRule& rule, int p, double x);

/** dhat(a,b) = phi_b'(t_a) on the reference element. */
Eigen::MatrixXd derivative_matrix(const GaussLobattoRule& rule);

/** A(p,m) = int_0^{t_p} phi_m, the LobattoIIIA coefficient table. */
Eigen::MatrixXd integration_table(const GaussLobattoRule& rule);

/** Element matrices for a cell of width delta, all integrals by GL collocation. */
struct LocalBlocks {
  Eigen::MatrixXd mass;       // (phi_a, phi_b)
  Eigen::MatrixXd deriv;      // (phi_a, phi_b')
  Eigen::MatrixXd deriv_t;    // (phi_a', phi_b)
  Eigen::MatrixXd stiff;      // (phi_a', phi_b')
  Eigen::MatrixXd integ;      // prefix integration within the cell
  Eigen::MatrixXd deriv_int;  // deriv * integ
  Eigen::MatrixXd stiff_int;  // stiff * integ
};

LocalBlocks build_local_blocks(const GaussLobattoRule& rule, double delta);

enum class IntegrationOrigin { left, right };

/**
 * One-dimensional operator family on a line of N cells of degree K.
 *
 * Global node g = i*K + p for cell i and local node p, so interface nodes are
 * shared. In periodic mode node n-1 duplicates node 0; every operator then
 * folds the row of the duplicate into row 0 and copies the result back, so
 * consistent inputs produce consistent outputs.
 */
class OperatorSet1D {
public:
  OperatorSet1D(int K, int N, double delta, double x0 = 0.0, bool periodic = false);

  int degree() const { return K_; }
  int cells() const { return N_; }
  int size() const { return K_ * N_ + 1; }
  double delta() const { return delta_; }
  bool periodic() const { return periodic_; }

  const GaussLobattoRule& rule() const { return rule_; }
  const LocalBlocks& local() const { return local_; }
  const Eigen::VectorXd& nodes() const { return nodes_; }

  const LineOp& mass() const { return mass_; }
  const LineOp& mass_inv() const { return mass_inv_; }
  const LineOp& deriv() const { return deriv_; }
  const LineOp& deriv_t() const { return deriv_t_; }
  const LineOp& stiff() const { return stiff_; }
  const LineOp& oss_z() const { return oss_z_; }
  const LineOp& deriv_int() const { return deriv_int_; }
  const LineOp& stiff_int() const { return stiff_int_; }
  const LineOp& identity() const { return identity_; }

  /** Diagonal of the (folded) mass matrix. */
  const Eigen::VectorXd& mass_diag() const { return mass_diag_; }

  /** Quadrature weights for norms; the periodic duplicate gets weight 0. */
  const Eigen::VectorXd& norm_weights() const { return norm_weights_; }

  /**
   * Cumulative integral of the nodal interpolant, starting from 0 at the left
   * end (or ending at 0 at the right end). Not defined for periodic lines.
   */
  Eigen::VectorXd prefix(const Eigen::VectorXd& q,
                         IntegrationOrigin origin = IntegrationOrigin::left) const;

  /** Dense global prefix matrix; test and diagnostic use only. */
  Eigen::MatrixXd prefix_matrix() const;

private:
  LineOp assemble(const Eigen::MatrixXd& block) const;
  LineOp fold(const LineOp& raw) const;

  int K_;
  int N_;
  double delta_;
  bool periodic_;
  GaussLobattoRule rule_;
  LocalBlocks local_;
  Eigen::VectorXd nodes_;
  Eigen::VectorXd mass_diag_;
  Eigen::VectorXd norm_weights_;
  LineOp mass_, mass_inv_, deriv_, deriv_t_, stiff_, oss_z_;
  LineOp deriv_int_, stiff_int_, identity_;
};

}  // namespace gfsem
