#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace gfsem;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using oracle::Dense2D;
using oracle::GFDense;
using oracle::gf_dense;

namespace {

double diff(const State& a, const MatrixXd& u, const MatrixXd& v, const MatrixXd& p) {
  const double scale = std::max({1.0, u.cwiseAbs().maxCoeff(), v.cwiseAbs().maxCoeff(),
                                 p.cwiseAbs().maxCoeff()});
  return std::max({(a.u.values - u).cwiseAbs().maxCoeff(), (a.v.values - v).cwiseAbs().maxCoeff(),
                   (a.p.values - p).cwiseAbs().maxCoeff()}) /
         scale;
}

SourceFields random_sources(std::mt19937& rng, const GridPtr& g) {
  SourceFields s(g);
  s.su.values = oracle::random_matrix(rng, g->nx(), g->ny());
  s.sv.values = oracle::random_matrix(rng, g->nx(), g->ny());
  s.sp.values = oracle::random_matrix(rng, g->nx(), g->ny());
  return s;
}

SchemeConfig scheme(Formulation f, Stabilization s, const Grid2D& g, double alpha = 0.07) {
  SchemeConfig c = SchemeConfig::make(f, s, g);
  c.alpha = alpha;
  return c;
}

}  // namespace

TEST_CASE("galerkin forms match dense Kronecker oracles") {
  std::mt19937 rng(1);
  for (int K = 1; K <= 3; ++K) {
    const auto g = make_grid(K, 3, 2, Box{0, 1.2, -0.5, 0.5});
    const Dense2D d(*g);
    const State q = oracle::random_state(rng, g);
    const SourceFields s = random_sources(rng, g);
    const MatrixXd MM_su = d.op(d.x.M, d.y.M, s.su.values);
    const MatrixXd MM_sv = d.op(d.x.M, d.y.M, s.sv.values);
    const MatrixXd MM_sp = d.op(d.x.M, d.y.M, s.sp.values);
    CHECK(diff(galerkin_standard(q, s), d.op(d.x.D, d.y.M, q.p.values) - MM_su,
               d.op(d.x.M, d.y.D, q.p.values) - MM_sv,
               d.op(d.x.D, d.y.M, q.u.values) + d.op(d.x.M, d.y.D, q.v.values) - MM_sp) < 1e-13);
    const GFDense f = gf_dense(d, q, s);
    CHECK(diff(galerkin_gf(q, s), d.op(d.x.D, d.y.M, f.pKu), d.op(d.x.M, d.y.D, f.pKv),
               d.op(d.x.D, d.y.D, f.G)) < 1e-13);
  }
}

TEST_CASE("SU forms match dense oracles") {
  std::mt19937 rng(2);
  for (int K = 1; K <= 3; ++K) {
    const auto g = make_grid(K, 2, 3, Box{0, 1, 0, 1.5});
    const Dense2D d(*g);
    const State q = oracle::random_state(rng, g);
    const State dq = oracle::random_state(rng, g);
    const SourceFields s = random_sources(rng, g);

    const SchemeConfig cs = scheme(Formulation::standard, Stabilization::su, *g);
    const double tau = cs.tau();
    const SUParts ps = stab_su(q, s, cs, dq);
    const MatrixXd& u = q.u.values;
    const MatrixXd& v = q.v.values;
    const MatrixXd& p = q.p.values;
    CHECK(diff(ps.space,
               tau * (d.op(d.x.DD, d.y.M, u) + d.op(d.x.Dt, d.y.D, v) - d.op(d.x.Dt, d.y.M, s.sp.values)),
               tau * (d.op(d.x.D, d.y.Dt, u) + d.op(d.x.M, d.y.DD, v) - d.op(d.x.M, d.y.Dt, s.sp.values)),
               tau * (d.op(d.x.DD, d.y.M, p) - d.op(d.x.Dt, d.y.M, s.su.values) +
                      d.op(d.x.M, d.y.DD, p) - d.op(d.x.M, d.y.Dt, s.sv.values))) < 1e-12);
    CHECK(diff(ps.time, tau * d.op(d.x.Dt, d.y.M, dq.p.values), tau * d.op(d.x.M, d.y.Dt, dq.p.values),
               tau * (d.op(d.x.Dt, d.y.M, dq.u.values) + d.op(d.x.M, d.y.Dt, dq.v.values))) < 1e-13);

    const SchemeConfig cg = scheme(Formulation::global_flux, Stabilization::su, *g);
    const SUParts pg = stab_su(q, s, cg, dq);
    const GFDense f = gf_dense(d, q, s);
    CHECK(diff(pg.space, tau * d.op(d.x.DD, d.y.D, f.G), tau * d.op(d.x.D, d.y.DD, f.G),
               tau * (d.op(d.x.DD, d.y.M, f.pKu) + d.op(d.x.M, d.y.DD, f.pKv))) < 1e-12);
    CHECK(diff(pg.time, ps.time.u.values, ps.time.v.values, ps.time.p.values) == 0.0);
  }
}

TEST_CASE("OSS forms match dense Z-matrix oracles") {
  std::mt19937 rng(3);
  for (int K = 1; K <= 3; ++K) {
    const auto g = make_grid(K, 3, 3);
    const Dense2D d(*g);
    const State q = oracle::random_state(rng, g);
    const SourceFields s = random_sources(rng, g);
    const SchemeConfig cs = scheme(Formulation::standard, Stabilization::oss, *g);
    const double tau = cs.tau();
    CHECK(diff(stab_oss(q, s, cs), tau * d.op(d.x.Z, d.y.M, q.u.values),
               tau * d.op(d.x.M, d.y.Z, q.v.values),
               tau * (d.op(d.x.Z, d.y.M, q.p.values) + d.op(d.x.M, d.y.Z, q.p.values))) < 1e-11);
    const SchemeConfig cg = scheme(Formulation::global_flux, Stabilization::oss, *g);
    const GFDense f = gf_dense(d, q, s);
    CHECK(diff(stab_oss(q, s, cg), tau * d.op(d.x.Z, d.y.D, f.G), tau * d.op(d.x.D, d.y.Z, f.G),
               tau * (d.op(d.x.Z, d.y.M, f.pKu) + d.op(d.x.M, d.y.Z, f.pKv))) < 1e-11);
  }
}

TEST_CASE("OSS-GF agrees with the unsimplified projection definition") {
  std::mt19937 rng(4);
  for (int K = 1; K <= 2; ++K)
    for (int N = 1; N <= 4; ++N) {
      const auto g = make_grid(K, N, N);
      const Dense2D d(*g);
      const State q = oracle::random_state(rng, g);
      const SourceFields s = random_sources(rng, g);
      const SchemeConfig c = scheme(Formulation::global_flux, Stabilization::oss, *g);
      const double tau = c.tau();
      const GFDense f = gf_dense(d, q, s);
      const MatrixXd Mxi = d.x.M.inverse(), Myi = d.y.M.inverse();
      // L2 projections of the residual pieces onto the continuous finite element space.
      const MatrixXd w_div = d.op(Mxi, Myi, d.op(d.x.D, d.y.D, f.G));
      const MatrixXd w_px = d.op(Mxi, Myi, d.op(d.x.D, d.y.M, f.pKu));
      const MatrixXd w_py = d.op(Mxi, Myi, d.op(d.x.M, d.y.D, f.pKv));
      const MatrixXd ru = d.op(d.x.DD, d.y.D, f.G) - d.op(d.x.Dt, d.y.M, w_div);
      const MatrixXd rv = d.op(d.x.D, d.y.DD, f.G) - d.op(d.x.M, d.y.Dt, w_div);
      const MatrixXd rp = d.op(d.x.DD, d.y.M, f.pKu) - d.op(d.x.Dt, d.y.M, w_px) +
                          d.op(d.x.M, d.y.DD, f.pKv) - d.op(d.x.M, d.y.Dt, w_py);
      CHECK(diff(stab_oss(q, s, c), tau * ru, tau * rv, tau * rp) < 1e-11);
    }
}

TEST_CASE("GF spatial residuals vanish on random kernel members, standard ones do not") {
  std::mt19937 rng(5);
  int standard_nonzero = 0, total = 0;
  for (int K = 1; K <= 3; ++K)
    for (int trial = 0; trial < 4; ++trial) {
      const auto g = make_grid(K, 4, 3);
      const auto k = oracle::random_kernel_state(rng, g);
      for (Stabilization st : {Stabilization::none, Stabilization::su, Stabilization::oss}) {
        const State r = spatial_residual(k.state, k.sources, scheme(Formulation::global_flux, st, *g));
        CHECK(oracle::scaled_interior_max(r) < 1e-11);
      }
      const State rs =
          spatial_residual(k.state, k.sources, scheme(Formulation::standard, Stabilization::su, *g));
      ++total;
      if (oracle::scaled_interior_max(rs) > 1e-6) ++standard_nonzero;
    }
  CHECK(standard_nonzero == total);
}

TEST_CASE("residuals are linear in state and sources jointly") {
  std::mt19937 rng(6);
  const auto g = make_grid(2, 3, 3);
  const State q1 = oracle::random_state(rng, g), q2 = oracle::random_state(rng, g);
  const SourceFields s1 = random_sources(rng, g), s2 = random_sources(rng, g);
  SourceFields s12(g);
  s12.su = 2.0 * s1.su + (-0.5) * s2.su;
  s12.sv = 2.0 * s1.sv + (-0.5) * s2.sv;
  s12.sp = 2.0 * s1.sp + (-0.5) * s2.sp;
  for (Formulation f : {Formulation::standard, Formulation::global_flux})
    for (Stabilization st : {Stabilization::su, Stabilization::oss}) {
      const SchemeConfig c = scheme(f, st, *g);
      const State lhs = spatial_residual(2.0 * q1 + (-0.5) * q2, s12, c);
      const State rhs = 2.0 * spatial_residual(q1, s1, c) + (-0.5) * spatial_residual(q2, s2, c);
      CHECK((lhs - rhs).max_abs() < 1e-11);
    }
}

TEST_CASE("residual parts add up to the spatial residual") {
  std::mt19937 rng(7);
  const auto g = make_grid(2, 2, 3);
  const State q = oracle::random_state(rng, g), dq = oracle::random_state(rng, g);
  const SourceFields s = random_sources(rng, g);
  for (Formulation f : {Formulation::standard, Formulation::global_flux})
    for (Stabilization st : {Stabilization::none, Stabilization::su, Stabilization::oss}) {
      const SchemeConfig c = scheme(f, st, *g);
      const ResidualParts parts = residual_parts(q, s, c, dq);
      CHECK((parts.galerkin + parts.stab_space - spatial_residual(q, s, c)).max_abs() < 1e-12);
      if (st != Stabilization::su) CHECK(parts.stab_time.max_abs() == 0.0);
    }
}

TEST_CASE("scheme configuration defaults and names") {
  CHECK(SchemeConfig::default_alpha(Stabilization::su, 2) == 0.05);
  CHECK(SchemeConfig::default_alpha(Stabilization::su, 6) == 0.02);
  CHECK(SchemeConfig::default_alpha(Stabilization::oss, 2) == 0.01);
  CHECK(SchemeConfig::default_alpha(Stabilization::oss, 3) == 0.04);
  const auto g = make_grid(2, 10, 20, Box{0, 1, 0, 1});
  const SchemeConfig c = SchemeConfig::make(Formulation::global_flux, Stabilization::su, *g);
  CHECK(c.tau() == doctest::Approx(0.05 * 0.05));
  CHECK(to_string(Formulation::global_flux) == "gf");
  CHECK(to_string(Stabilization::oss) == "oss");
  CHECK(to_string(BoundaryMode::dirichlet_exact) == "dirichlet");
}

TEST_CASE("global flux needs non-periodic lines") {
  const auto g = make_grid(2, 4, 4, Box{}, true, true);
  State q(g);
  SourceFields s(g);
  CHECK_THROWS_AS(galerkin_gf(q, s), ConfigError);
  CHECK_NOTHROW(galerkin_standard(q, s));
}

TEST_CASE("Dirichlet boundary handling pins values and zeroes rows") {
  std::mt19937 rng(8);
  const auto g = make_grid(2, 2, 2);
  State q = oracle::random_state(rng, g), r = oracle::random_state(rng, g);
  const State q0 = q, r0 = r;
  const StateFn exact = [](double x, double y, double t) {
    return std::array<double, 3>{x + t, y, x * y};
  };
  apply_boundary_conditions(r, q, BoundaryMode::neumann, exact, 0.0);
  CHECK((q - q0).max_abs() == 0.0);
  CHECK((r - r0).max_abs() == 0.0);
  apply_boundary_conditions(r, q, BoundaryMode::dirichlet_exact, exact, 0.5);
  for (int a = 0; a < g->nx(); ++a)
    for (int b = 0; b < g->ny(); ++b) {
      if (g->on_boundary(a, b)) {
        CHECK(q.u(a, b) == doctest::Approx(g->x()[a] + 0.5));
        CHECK(q.p(a, b) == doctest::Approx(g->x()[a] * g->y()[b]));
        CHECK(r.v(a, b) == 0.0);
      } else {
        CHECK(q.u(a, b) == q0.u(a, b));
        CHECK(r.p(a, b) == r0.p(a, b));
      }
    }
  CHECK_THROWS_AS(apply_boundary_conditions(r, q, BoundaryMode::dirichlet_exact, StateFn{}, 0.0),
                  ConfigError);
}
