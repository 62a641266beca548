#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>
#include <stdexcept>

using namespace gfsem;

TEST_CASE("grid geometry and node layout") {
  const auto g = make_grid(3, 4, 2, Box{-1, 1, 0, 0.5});
  CHECK(g->nx() == 13);
  CHECK(g->ny() == 7);
  CHECK(g->dx() == doctest::Approx(0.5));
  CHECK(g->dy() == doctest::Approx(0.25));
  CHECK(g->h() == doctest::Approx(0.25));
  CHECK(g->x()[0] == -1.0);
  CHECK(std::abs(g->x()[12] - 1.0) < 1e-15);
  CHECK(std::abs(g->y()[3] - 0.25) < 1e-15);
  CHECK(g->on_boundary(0, 3));
  CHECK_FALSE(g->on_boundary(1, 1));
}

TEST_CASE("matrix-free tensor application matches the dense Kronecker oracle") {
  std::mt19937 rng(3);
  const auto g = make_grid(2, 3, 2, Box{0, 1.5, 0, 1});
  const auto& ox = g->ox();
  const auto& oy = g->oy();
  const Eigen::MatrixXd Q = oracle::random_matrix(rng, g->nx(), g->ny());
  const std::pair<const LineOp*, const LineOp*> pairs[] = {
      {&ox.deriv(), &oy.mass()}, {&ox.mass(), &oy.deriv()}, {&ox.stiff(), &oy.deriv_t()},
      {&ox.deriv_int(), &oy.stiff_int()}, {&ox.oss_z(), &oy.deriv()}};
  for (const auto& [Ax, Ay] : pairs) {
    const Eigen::MatrixXd dense = oracle::kron_xy(Eigen::MatrixXd(*Ax), Eigen::MatrixXd(*Ay));
    const Eigen::MatrixXd ref = oracle::unvec(dense * oracle::vec(Q), g->nx(), g->ny());
    CHECK((apply_xy(*Ax, *Ay, Q) - ref).cwiseAbs().maxCoeff() < 1e-12);
  }
  CHECK((apply_x(ox.deriv(), Q) - apply_xy(ox.deriv(), oy.identity(), Q)).cwiseAbs().maxCoeff() <
        1e-14);
  CHECK((apply_y(oy.deriv(), Q) - apply_xy(ox.identity(), oy.deriv(), Q)).cwiseAbs().maxCoeff() <
        1e-14);
}

TEST_CASE("tensor application rejects mismatched shapes") {
  const auto g = make_grid(2, 3, 2);
  const Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(g->ny(), g->nx());
  CHECK_THROWS(apply_xy(g->ox().deriv(), g->oy().mass(), Q));
}

TEST_CASE("adjoint identity (A kron B)^T = A^T kron B^T") {
  std::mt19937 rng(11);
  const auto g = make_grid(3, 2, 3);
  const Eigen::MatrixXd P = oracle::random_matrix(rng, g->nx(), g->ny());
  const Eigen::MatrixXd Q = oracle::random_matrix(rng, g->nx(), g->ny());
  const LineOp& A = g->ox().deriv();
  const LineOp& B = g->oy().stiff_int();
  const LineOp At = A.transpose(), Bt = B.transpose();
  const double lhs = (P.array() * apply_xy(A, B, Q).array()).sum();
  const double rhs = (apply_xy(At, Bt, P).array() * Q.array()).sum();
  CHECK(std::abs(lhs - rhs) < 1e-11 * std::max(1.0, std::abs(lhs)));
}

TEST_CASE("prefix along both directions commutes and integrates polynomials exactly") {
  const auto g = make_grid(2, 3, 4, Box{0, 1, 0.5, 2});
  const Field q = interpolate(g, [](double x, double y) { return x * y * y; });
  const Eigen::MatrixXd a = prefix_x(*g, prefix_y(*g, q.values));
  const Eigen::MatrixXd b = prefix_y(*g, prefix_x(*g, q.values));
  CHECK((a - b).cwiseAbs().maxCoeff() < 1e-14);
  const Field ex = interpolate(g, [](double x, double y) {
    return 0.5 * x * x * (y * y * y - 0.125) / 3.0;
  });
  CHECK((a - ex.values).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("norms use the tensor quadrature") {
  const auto g = make_grid(3, 5, 4, Box{0, 2, 0, 1});
  const Field one = interpolate(g, [](double, double) { return 1.0; });
  CHECK(l2_norm(one) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  const Field x = interpolate(g, [](double x, double) { return x; });
  CHECK(l2_norm(x) == doctest::Approx(std::sqrt(8.0 / 3.0)).epsilon(1e-14));
  CHECK(l2_norm(one, true) < l2_norm(one));
  CHECK(l2_error(x, [](double x, double) { return x; }) == 0.0);
  CHECK(max_error(x, [](double x, double) { return x + 0.5; }) == doctest::Approx(0.5));
  const Eigen::MatrixXd Mi = apply_mass_inv(*g, one.values);
  const Eigen::MatrixXd back =
      g->ox().mass_diag().asDiagonal() * Mi * g->oy().mass_diag().asDiagonal();
  CHECK((back - one.values).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("interpolation rejects non-finite samples with the node named") {
  const auto g = make_grid(1, 2, 2);
  try {
    interpolate(g, [](double x, double) { return 1.0 / (x - 0.5); });
    FAIL("expected domain_error");
  } catch (const std::domain_error& e) {
    CHECK(std::string(e.what()).find("0.5") != std::string::npos);
  }
}

TEST_CASE("vortex pressure at the centre") {
  const auto g = make_grid(2, 10, 10);
  const ProblemSpec vortex = coriolis_vortex();
  const Field p = interpolate(g, vortex.exact_component(2));
  CHECK(std::abs(p(10, 10) - 0.98) < 1e-15);
}

TEST_CASE("field and state IO round-trip") {
  std::mt19937 rng(5);
  const auto g = make_grid(2, 3, 2, Box{0.25, 1, -1, 1});
  const State s = oracle::random_state(rng, g);
  const auto dir = std::filesystem::temp_directory_path() / "gfsem_io_test";
  std::filesystem::create_directories(dir);
  const std::string prefix = (dir / "state").string();
  write_state(prefix, s);
  const State r = read_state(prefix, g);
  CHECK((r.u.values - s.u.values).cwiseAbs().maxCoeff() == 0.0);
  CHECK((r.v.values - s.v.values).cwiseAbs().maxCoeff() == 0.0);
  CHECK((r.p.values - s.p.values).cwiseAbs().maxCoeff() == 0.0);
  const auto other = make_grid(2, 4, 2, Box{0.25, 1, -1, 1});
  CHECK_THROWS(read_state(prefix, other));
  std::filesystem::remove_all(dir);
}

TEST_CASE("state arithmetic") {
  std::mt19937 rng(8);
  const auto g = make_grid(1, 2, 2);
  const State a = oracle::random_state(rng, g), b = oracle::random_state(rng, g);
  const State c = a + 2.0 * b - a;
  CHECK((c.p.values - 2.0 * b.p.values).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(c.all_finite());
  State d = c;
  d.u(0, 0) = NAN;
  CHECK_FALSE(d.all_finite());
}
