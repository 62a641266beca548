#include "gfsem/init.hpp"

#include <Eigen/OrderingMethods>
#include <Eigen/SparseQR>

#include <cmath>

namespace gfsem {
namespace {

using SpMat = Eigen::SparseMatrix<double>;

// Sparse matrix of q -> Ax * Q * Ay^T acting on column-major vec(Q).
SpMat kron_operator(const LineOp& Ax, const LineOp& Ay) {
  const int nx = Ax.rows(), ny = Ay.rows();
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(static_cast<size_t>(Ax.nonZeros()) * Ay.nonZeros());
  for (int ib = 0; ib < Ay.outerSize(); ++ib)
    for (LineOp::InnerIterator ey(Ay, ib); ey; ++ey)
      for (int ia = 0; ia < Ax.outerSize(); ++ia)
        for (LineOp::InnerIterator ex(Ax, ia); ex; ++ex)
          t.emplace_back(ib * nx + ia, static_cast<int>(ey.col()) * nx + static_cast<int>(ex.col()),
                         ex.value() * ey.value());
  SpMat m(nx * ny, Ax.cols() * Ay.cols());
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

double interior_max(const Eigen::MatrixXd& m) {
  if (m.rows() <= 2 || m.cols() <= 2) return 0.0;
  return m.block(1, 1, m.rows() - 2, m.cols() - 2).cwiseAbs().maxCoeff();
}

void require_steady_exact(const ProblemSpec& problem, const char* who) {
  if (!problem.exact || !problem.gradient)
    throw ConfigError(std::string(who) + " needs a problem with an exact solution");
  if (!problem.steady) throw ConfigError(std::string(who) + " needs a steady problem");
}

// Pressure from the source integrals, blending the two integration paths.
Eigen::MatrixXd blended_pressure(const Grid2D& g, const SourceFields& s, const Eigen::MatrixXd& pe_x0,
                                 const Eigen::MatrixXd& pe_y0, double lambda) {
  const Eigen::MatrixXd Ku = prefix_x(g, s.su.values);
  const Eigen::MatrixXd Kv = prefix_y(g, s.sv.values);
  return lambda * (Ku + pe_x0) + (1.0 - lambda) * (Kv + pe_y0);
}

SchemeConfig reference_scheme(const Grid2D& g) {
  return SchemeConfig::make(Formulation::global_flux, Stabilization::su, g);
}

}  // namespace

double kernel_residual(const State& q, const ProblemSpec& problem, const SchemeConfig& cfg,
                       double t) {
  SourceEvaluator src(problem, q.grid());
  const State r = spatial_residual(q, src(q, t), cfg);
  const Grid2D& g = *q.grid();
  return std::max({interior_max(apply_mass_inv(g, r.u.values)),
                   interior_max(apply_mass_inv(g, r.v.values)),
                   interior_max(apply_mass_inv(g, r.p.values))});
}

State line_by_line_projection(const ProblemSpec& problem, const GridPtr& grid, double lambda,
                              ProjectionReport* report) {
  require_steady_exact(problem, "line-by-line projection");
  const Grid2D& g = *grid;
  const int nx = g.nx(), ny = g.ny();
  const Box& bx = g.box();

  Eigen::MatrixXd vy(nx, ny), ux(nx, ny);
  for (int a = 0; a < nx; ++a)
    for (int b = 0; b < ny; ++b) {
      const ExactGradient d = problem.gradient(g.x()[a], g.y()[b], 0.0);
      ux(a, b) = d.ux;
      vy(a, b) = d.vy;
    }
  SourceEvaluator src(problem, grid);
  const Eigen::MatrixXd sp = src(State(grid), 0.0).sp.values;

  State q(grid);
  const Eigen::MatrixXd du = prefix_x(g, vy - sp);
  const Eigen::MatrixXd dv = prefix_y(g, ux - sp);
  for (int a = 0; a < nx; ++a)
    for (int b = 0; b < ny; ++b) {
      q.u(a, b) = problem.exact(bx.x0, g.y()[b], 0.0)[0] - du(a, b);
      q.v(a, b) = problem.exact(g.x()[a], bx.y0, 0.0)[1] - dv(a, b);
    }

  const SourceFields s = src(q, 0.0);
  const Eigen::MatrixXd Ku = prefix_x(g, s.su.values);
  const Eigen::MatrixXd Kv = prefix_y(g, s.sv.values);
  const double p00 = problem.exact(bx.x0, bx.y0, 0.0)[2];
  for (int a = 0; a < nx; ++a)
    for (int b = 0; b < ny; ++b)
      q.p(a, b) = p00 + (1.0 - lambda) * (Ku(a, 0) + Kv(a, b)) + lambda * (Kv(0, b) + Ku(a, b));

  if (report) {
    report->method = "line_by_line";
    report->lambda = lambda;
    report->kernel_residual = kernel_residual(q, problem, reference_scheme(g));
    const double du2 = l2_error(q.u, problem.exact_component(0));
    const double dv2 = l2_error(q.v, problem.exact_component(1));
    report->deviation = std::sqrt(du2 * du2 + dv2 * dv2);
  }
  return q;
}

State optimization_projection(const ProblemSpec& problem, const GridPtr& grid,
                              const State* reference, double lambda, ProjectionReport* report,
                              PressureTraces traces) {
  if (!problem.exact) throw ConfigError("optimization projection needs an exact solution");
  const Grid2D& g = *grid;
  if (g.periodic()) throw ConfigError("optimization projection is not available on periodic grids");
  const int nx = g.nx(), ny = g.ny(), n = nx * ny;
  const OperatorSet1D& ox = g.ox();
  const OperatorSet1D& oy = g.oy();

  const State target = reference ? *reference : sample_state(grid, problem.exact, 0.0);
  SourceEvaluator src(problem, grid);
  const Eigen::MatrixXd sp = src(target, 0.0).sp.values;

  // Constraint C [u; v] = rhs.
  const SpMat Cu = kron_operator(ox.deriv(), oy.deriv_int());
  const SpMat Cv = kron_operator(ox.deriv_int(), oy.deriv());
  const Eigen::MatrixXd rhs_m = apply_xy(ox.deriv_int(), oy.deriv_int(), sp);
  const Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(rhs_m.data(), n);

  Eigen::VectorXd x0(2 * n);
  x0.head(n) = Eigen::Map<const Eigen::VectorXd>(target.u.values.data(), n);
  x0.tail(n) = Eigen::Map<const Eigen::VectorXd>(target.v.values.data(), n);

  const Eigen::MatrixXd w2 = ox.mass_diag() * oy.mass_diag().transpose();
  Eigen::VectorXd winv_sqrt(2 * n);
  winv_sqrt.head(n) = Eigen::Map<const Eigen::VectorXd>(w2.data(), n).cwiseSqrt().cwiseInverse();
  winv_sqrt.tail(n) = winv_sqrt.head(n);

  std::vector<Eigen::Triplet<double>> t;
  t.reserve(Cu.nonZeros() + Cv.nonZeros());
  for (int k = 0; k < Cu.outerSize(); ++k)
    for (SpMat::InnerIterator it(Cu, k); it; ++it)
      t.emplace_back(it.row(), it.col(), it.value() * winv_sqrt[it.col()]);
  for (int k = 0; k < Cv.outerSize(); ++k)
    for (SpMat::InnerIterator it(Cv, k); it; ++it)
      t.emplace_back(it.row(), n + it.col(), it.value() * winv_sqrt[n + it.col()]);
  SpMat A(n, 2 * n);
  A.setFromTriplets(t.begin(), t.end());
  A.prune(0.0);

  SpMat C(n, 2 * n);
  {
    std::vector<Eigen::Triplet<double>> tc;
    for (int k = 0; k < Cu.outerSize(); ++k)
      for (SpMat::InnerIterator it(Cu, k); it; ++it) tc.emplace_back(it.row(), it.col(), it.value());
    for (int k = 0; k < Cv.outerSize(); ++k)
      for (SpMat::InnerIterator it(Cv, k); it; ++it)
        tc.emplace_back(it.row(), n + it.col(), it.value());
    C.setFromTriplets(tc.begin(), tc.end());
  }
  const Eigen::VectorXd r = rhs - C * x0;

  // Minimum-norm z with A z = r through a QR of A^T: A^T P = Q R.
  SpMat At = A.transpose();
  At.makeCompressed();
  Eigen::SparseQR<SpMat, Eigen::COLAMDOrdering<int>> qr;
  qr.compute(At);
  if (qr.info() != Eigen::Success) throw std::runtime_error("sparse QR of the constraint failed");
  const long rank = qr.rank();
  const Eigen::VectorXd pr = qr.colsPermutation().transpose() * r;
  const SpMat R = qr.matrixR();
  const SpMat Rk = R.topLeftCorner(rank, rank);
  Eigen::VectorXd y1 = pr.head(rank);
  Rk.transpose().triangularView<Eigen::Lower>().solveInPlace(y1);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(2 * n);
  y.head(rank) = y1;
  const Eigen::VectorXd z = qr.matrixQ() * y;
  const Eigen::VectorXd x = x0 + winv_sqrt.cwiseProduct(z);

  State q(grid);
  q.u.values = Eigen::Map<const Eigen::MatrixXd>(x.data(), nx, ny);
  q.v.values = Eigen::Map<const Eigen::MatrixXd>(x.data() + n, nx, ny);

  const Box& bx = g.box();
  const SourceFields s = src(q, 0.0);
  Eigen::MatrixXd pe_x0(nx, ny), pe_y0(nx, ny);
  if (traces == PressureTraces::exact) {
    for (int a = 0; a < nx; ++a)
      for (int b = 0; b < ny; ++b) {
        pe_x0(a, b) = problem.exact(bx.x0, g.y()[b], 0.0)[2];
        pe_y0(a, b) = problem.exact(g.x()[a], bx.y0, 0.0)[2];
      }
  } else {
    const double p00 = problem.exact(bx.x0, bx.y0, 0.0)[2];
    const Eigen::VectorXd left = oy.prefix(s.sv.values.row(0).transpose());
    const Eigen::VectorXd bottom = ox.prefix(s.su.values.col(0));
    pe_x0 = (p00 + left.array()).matrix().transpose().replicate(nx, 1);
    pe_y0 = (p00 + bottom.array()).matrix().replicate(1, ny);
  }
  q.p.values = blended_pressure(g, s, pe_x0, pe_y0, lambda);

  if (report) {
    report->method = "optimize";
    report->lambda = lambda;
    report->rank = rank;
    report->constraint_rows = n;
    report->constraint_residual = (C * x - rhs).cwiseAbs().maxCoeff();
    report->kernel_residual = kernel_residual(q, problem, reference_scheme(g));
    const double du2 = l2_norm(q.u - target.u);
    const double dv2 = l2_norm(q.v - target.v);
    report->deviation = std::sqrt(du2 * du2 + dv2 * dv2);
  }
  return q;
}

State from_long_run(const ProblemSpec& problem, const SchemeConfig& scheme, const GridPtr& grid,
                    double T_settle, double cfl) {
  if (!problem.exact) throw ConfigError("long-run initialization needs initial data");
  State q = sample_state(grid, problem.exact, 0.0);
  if (T_settle <= 0.0) return q;
  AcousticSystem sys(problem, grid, scheme);
  DeCConfig dec = DeCConfig::for_degree(grid->degree());
  dec.cfl = cfl;
  return run_dec(sys, q, T_settle, time_step(*grid, cfl), dec);
}

}  // namespace gfsem
