#pragma once

#include "gfsem/gl_basis.hpp"

#include <algorithm>
#include <functional>
#include <memory>
#include <string>

namespace gfsem {

struct Box {
  double x0 = 0.0, xe = 1.0, y0 = 0.0, ye = 1.0;
};

/** Cartesian tensor mesh of degree K with shared interface nodes. */
class Grid2D {
public:
  Grid2D(int K, int Nx, int Ny, Box box = {}, bool periodic_x = false, bool periodic_y = false);

  int degree() const { return K_; }
  int Nx() const { return Nx_; }
  int Ny() const { return Ny_; }
  int nx() const { return ox_.size(); }
  int ny() const { return oy_.size(); }
  double dx() const { return ox_.delta(); }
  double dy() const { return oy_.delta(); }
  double h() const { return std::min(dx(), dy()); }
  const Box& box() const { return box_; }
  bool periodic() const { return ox_.periodic() || oy_.periodic(); }

  const OperatorSet1D& ox() const { return ox_; }
  const OperatorSet1D& oy() const { return oy_; }
  const Eigen::VectorXd& x() const { return ox_.nodes(); }
  const Eigen::VectorXd& y() const { return oy_.nodes(); }

  bool on_boundary(int a, int b) const {
    return a == 0 || b == 0 || a == nx() - 1 || b == ny() - 1;
  }

private:
  int K_, Nx_, Ny_;
  Box box_;
  OperatorSet1D ox_, oy_;
};

using GridPtr = std::shared_ptr<const Grid2D>;

GridPtr make_grid(int K, int Nx, int Ny, Box box = {}, bool periodic_x = false,
                  bool periodic_y = false);

/** Nodal values: row index is the x-node, column index the y-node. */
struct Field {
  GridPtr grid;
  Eigen::MatrixXd values;

  Field() = default;
  explicit Field(GridPtr g) : grid(std::move(g)), values(Eigen::MatrixXd::Zero(grid->nx(), grid->ny())) {}
  Field(GridPtr g, Eigen::MatrixXd v) : grid(std::move(g)), values(std::move(v)) {}

  double operator()(int a, int b) const { return values(a, b); }
  double& operator()(int a, int b) { return values(a, b); }

  Field& operator+=(const Field& o) { values += o.values; return *this; }
  Field& operator-=(const Field& o) { values -= o.values; return *this; }
  Field& operator*=(double s) { values *= s; return *this; }
};

inline Field operator+(Field a, const Field& b) { return a += b; }
inline Field operator-(Field a, const Field& b) { return a -= b; }
inline Field operator*(double s, Field a) { return a *= s; }

/** The acoustic unknowns on one grid. */
struct State {
  Field u, v, p;

  State() = default;
  explicit State(const GridPtr& g) : u(g), v(g), p(g) {}
  State(Field u_, Field v_, Field p_) : u(std::move(u_)), v(std::move(v_)), p(std::move(p_)) {}

  const GridPtr& grid() const { return u.grid; }

  State& operator+=(const State& o) { u += o.u; v += o.v; p += o.p; return *this; }
  State& operator-=(const State& o) { u -= o.u; v -= o.v; p -= o.p; return *this; }
  State& operator*=(double s) { u *= s; v *= s; p *= s; return *this; }

  bool all_finite() const {
    return u.values.allFinite() && v.values.allFinite() && p.values.allFinite();
  }
  double max_abs() const {
    return std::max({u.values.cwiseAbs().maxCoeff(), v.values.cwiseAbs().maxCoeff(),
                     p.values.cwiseAbs().maxCoeff()});
  }
};

inline State operator+(State a, const State& b) { return a += b; }
inline State operator-(State a, const State& b) { return a -= b; }
inline State operator*(double s, State a) { return a *= s; }

using ScalarFn = std::function<double(double, double)>;

/** Samples f at every node; throws std::domain_error on a non-finite sample. */
Field interpolate(const GridPtr& grid, const ScalarFn& f);

/** Matrix-free (Ax kron Ay) vec(q), computed as Ax * Q * Ay^T. */
Eigen::MatrixXd apply_xy(const LineOp& Ax, const LineOp& Ay, const Eigen::MatrixXd& q);
Field apply_xy(const LineOp& Ax, const LineOp& Ay, const Field& q);

/** Ax applied along x only, and Ay along y only. */
Eigen::MatrixXd apply_x(const LineOp& Ax, const Eigen::MatrixXd& q);
Eigen::MatrixXd apply_y(const LineOp& Ay, const Eigen::MatrixXd& q);

/** Cumulative integration of every grid line in one direction. */
Eigen::MatrixXd prefix_x(const Grid2D& g, const Eigen::MatrixXd& q,
                         IntegrationOrigin origin = IntegrationOrigin::left);
Eigen::MatrixXd prefix_y(const Grid2D& g, const Eigen::MatrixXd& q,
                         IntegrationOrigin origin = IntegrationOrigin::left);

/** Componentwise inverse of the diagonal mass M_x kron M_y. */
Eigen::MatrixXd apply_mass_inv(const Grid2D& g, const Eigen::MatrixXd& q);

/** Tensor GL weights; exclude_boundary zeroes the outermost node ring. */
Eigen::MatrixXd norm_weights(const Grid2D& g, bool exclude_boundary);

double l2_norm(const Field& q, bool exclude_boundary = false);
double l2_error(const Field& q, const ScalarFn& exact);
double max_error(const Field& q, const ScalarFn& exact);

/**
 * Plain-text dump: header "Nx Ny x0 xe y0 ye K" (cell counts), then one line
 * per x-node with 17 significant digits.
 */
void write_field(const std::string& path, const Field& q);
Field read_field(const std::string& path, const GridPtr& grid);

void write_state(const std::string& prefix, const State& s);
State read_state(const std::string& prefix, const GridPtr& grid);

}  // namespace gfsem
