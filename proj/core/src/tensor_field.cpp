#include "gfsem/tensor_field.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace gfsem {

Grid2D::Grid2D(int K, int Nx, int Ny, Box box, bool periodic_x, bool periodic_y)
    : K_(K), Nx_(Nx), Ny_(Ny), box_(box),
      ox_(K, Nx, (box.xe - box.x0) / Nx, box.x0, periodic_x),
      oy_(K, Ny, (box.ye - box.y0) / Ny, box.y0, periodic_y) {}

GridPtr make_grid(int K, int Nx, int Ny, Box box, bool periodic_x, bool periodic_y) {
  return std::make_shared<const Grid2D>(K, Nx, Ny, box, periodic_x, periodic_y);
}

Field interpolate(const GridPtr& grid, const ScalarFn& f) {
  Field out(grid);
  for (int a = 0; a < grid->nx(); ++a)
    for (int b = 0; b < grid->ny(); ++b) {
      const double val = f(grid->x()[a], grid->y()[b]);
      if (!std::isfinite(val)) {
        std::ostringstream msg;
        msg << "non-finite sample at node (" << a << "," << b << ") = (" << grid->x()[a]
            << "," << grid->y()[b] << ")";
        throw std::domain_error(msg.str());
      }
      out(a, b) = val;
    }
  return out;
}

Eigen::MatrixXd apply_x(const LineOp& Ax, const Eigen::MatrixXd& q) {
  if (Ax.cols() != q.rows()) throw std::invalid_argument("apply_x: dimension mismatch");
  return Ax * q;
}

Eigen::MatrixXd apply_y(const LineOp& Ay, const Eigen::MatrixXd& q) {
  if (Ay.cols() != q.cols()) throw std::invalid_argument("apply_y: dimension mismatch");
  return (Ay * q.transpose()).transpose();
}

Eigen::MatrixXd apply_xy(const LineOp& Ax, const LineOp& Ay, const Eigen::MatrixXd& q) {
  return apply_y(Ay, apply_x(Ax, q));
}

Field apply_xy(const LineOp& Ax, const LineOp& Ay, const Field& q) {
  return Field(q.grid, apply_xy(Ax, Ay, q.values));
}

Eigen::MatrixXd prefix_x(const Grid2D& g, const Eigen::MatrixXd& q, IntegrationOrigin origin) {
  Eigen::MatrixXd out(q.rows(), q.cols());
  for (int b = 0; b < q.cols(); ++b) out.col(b) = g.ox().prefix(q.col(b), origin);
  return out;
}

Eigen::MatrixXd prefix_y(const Grid2D& g, const Eigen::MatrixXd& q, IntegrationOrigin origin) {
  Eigen::MatrixXd out(q.rows(), q.cols());
  for (int a = 0; a < q.rows(); ++a) out.row(a) = g.oy().prefix(q.row(a).transpose(), origin).transpose();
  return out;
}

Eigen::MatrixXd apply_mass_inv(const Grid2D& g, const Eigen::MatrixXd& q) {
  const Eigen::VectorXd ix = g.ox().mass_diag().cwiseInverse();
  const Eigen::VectorXd iy = g.oy().mass_diag().cwiseInverse();
  return ix.asDiagonal() * q * iy.asDiagonal();
}

Eigen::MatrixXd norm_weights(const Grid2D& g, bool exclude_boundary) {
  Eigen::MatrixXd w = g.ox().norm_weights() * g.oy().norm_weights().transpose();
  if (exclude_boundary) {
    w.row(0).setZero();
    w.row(w.rows() - 1).setZero();
    w.col(0).setZero();
    w.col(w.cols() - 1).setZero();
  }
  return w;
}

double l2_norm(const Field& q, bool exclude_boundary) {
  const Eigen::MatrixXd w = norm_weights(*q.grid, exclude_boundary);
  return std::sqrt((w.array() * q.values.array().square()).sum());
}

double l2_error(const Field& q, const ScalarFn& exact) {
  return l2_norm(q - interpolate(q.grid, exact));
}

double max_error(const Field& q, const ScalarFn& exact) {
  return (q - interpolate(q.grid, exact)).values.cwiseAbs().maxCoeff();
}

void write_field(const std::string& path, const Field& q) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  const Grid2D& g = *q.grid;
  const Box& bx = g.box();
  os << std::setprecision(17);
  os << g.Nx() << ' ' << g.Ny() << ' ' << bx.x0 << ' ' << bx.xe << ' ' << bx.y0 << ' ' << bx.ye
     << ' ' << g.degree() << '\n';
  for (int a = 0; a < q.values.rows(); ++a) {
    for (int b = 0; b < q.values.cols(); ++b) {
      if (b) os << ' ';
      os << q.values(a, b);
    }
    os << '\n';
  }
  if (!os) throw std::runtime_error("write failed for " + path);
}

Field read_field(const std::string& path, const GridPtr& grid) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read " + path);
  int Nx = 0, Ny = 0, K = 0;
  double x0, xe, y0, ye;
  if (!(is >> Nx >> Ny >> x0 >> xe >> y0 >> ye >> K))
    throw std::runtime_error("malformed field header in " + path);
  const Box& bx = grid->box();
  const double tol = 1e-12;
  if (Nx != grid->Nx() || Ny != grid->Ny() || K != grid->degree() ||
      std::abs(x0 - bx.x0) > tol || std::abs(xe - bx.xe) > tol || std::abs(y0 - bx.y0) > tol ||
      std::abs(ye - bx.ye) > tol)
    throw std::runtime_error("field file " + path + " does not match the grid");
  Field q(grid);
  for (int a = 0; a < q.values.rows(); ++a)
    for (int b = 0; b < q.values.cols(); ++b)
      if (!(is >> q.values(a, b))) throw std::runtime_error("truncated field file " + path);
  return q;
}

void write_state(const std::string& prefix, const State& s) {
  write_field(prefix + "_u.dat", s.u);
  write_field(prefix + "_v.dat", s.v);
  write_field(prefix + "_p.dat", s.p);
}

State read_state(const std::string& prefix, const GridPtr& grid) {
  return State(read_field(prefix + "_u.dat", grid), read_field(prefix + "_v.dat", grid),
               read_field(prefix + "_p.dat", grid));
}

}  // namespace gfsem
