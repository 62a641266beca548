#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace gfsem;

namespace {

/** Derivative of the Legendre polynomial P_K on [-1,1] by long double recurrence. */
long double legendre_deriv(int K, long double x) {
  long double p0 = 1, p1 = x, d0 = 0, d1 = 1;
  if (K == 0) return 0;
  for (int k = 2; k <= K; ++k) {
    const long double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
    const long double d2 = d0 + (2 * k - 1) * p1;
    p0 = p1;
    p1 = p2;
    d0 = d1;
    d1 = d2;
  }
  return d1;
}

/** Interior GL nodes on [0,1] by sign-change scan and bisection. */
std::vector<double> bisection_nodes(int K) {
  std::vector<double> roots{0.0};
  const int samples = 20000;
  for (int s = 0; s < samples; ++s) {
    long double a = -1.0L + 2.0L * s / samples, b = -1.0L + 2.0L * (s + 1) / samples;
    if (s == 0) a += 1e-9L;
    if (s == samples - 1) b -= 1e-9L;
    long double fa = legendre_deriv(K, a), fb = legendre_deriv(K, b);
    if (fa == 0) {
      roots.push_back(static_cast<double>((a + 1) / 2));
      continue;
    }
    if (fa * fb >= 0) continue;
    for (int it = 0; it < 200; ++it) {
      const long double m = (a + b) / 2, fm = legendre_deriv(K, m);
      if ((fm < 0) == (fa < 0)) {
        a = m;
        fa = fm;
      } else {
        b = m;
      }
    }
    roots.push_back(static_cast<double>((a + b) / 4 + 0.5L));
  }
  roots.push_back(1.0);
  return roots;
}

double dense_max(const LineOp& a, const Eigen::MatrixXd& b) {
  return (Eigen::MatrixXd(a) - b).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("low degree nodes and weights match closed forms") {
  const auto r1 = gauss_lobatto_rule(1);
  CHECK(r1.nodes[0] == 0.0);
  CHECK(r1.nodes[1] == 1.0);
  CHECK(r1.weights[0] == doctest::Approx(0.5).epsilon(1e-15));
  const auto r2 = gauss_lobatto_rule(2);
  CHECK(std::abs(r2.nodes[1] - 0.5) < 1e-15);
  CHECK(std::abs(r2.weights[0] - 1.0 / 6) < 1e-15);
  CHECK(std::abs(r2.weights[1] - 2.0 / 3) < 1e-15);
  const auto r3 = gauss_lobatto_rule(3);
  CHECK(std::abs(r3.nodes[1] - (1 - 1 / std::sqrt(5.0)) / 2) < 1e-15);
  CHECK(std::abs(r3.weights[1] - 5.0 / 12) < 1e-15);
}

TEST_CASE("nodes agree with an independent bisection and satisfy the root condition") {
  for (int K = 1; K <= 12; ++K) {
    const auto rule = gauss_lobatto_rule(K);
    const auto ref = bisection_nodes(K);
    REQUIRE(static_cast<int>(ref.size()) == K + 1);
    for (int p = 0; p <= K; ++p) {
      CHECK(std::abs(rule.nodes[p] - ref[p]) < 1e-14);
      CHECK(std::abs(rule.nodes[p] + rule.nodes[K - p] - 1.0) < 1e-15);
      if (p > 0 && p < K) {
        const double scale = static_cast<double>(legendre_deriv(K, 1.0L));
        CHECK(std::abs(static_cast<double>(legendre_deriv(K, 2.0L * rule.nodes[p] - 1))) / scale <
              1e-14);
      }
    }
  }
}

TEST_CASE("quadrature is exact up to degree 2K-1") {
  for (int K = 1; K <= 12; ++K) {
    const auto rule = gauss_lobatto_rule(K);
    for (int m = 0; m <= 2 * K - 1; ++m) {
      double s = 0;
      for (int p = 0; p <= K; ++p) s += rule.weights[p] * std::pow(rule.nodes[p], m);
      CHECK(std::abs(s - 1.0 / (m + 1)) < 2e-15);
    }
  }
}

TEST_CASE("invalid degree is rejected") {
  CHECK_THROWS_AS(gauss_lobatto_rule(0), std::invalid_argument);
  CHECK_THROWS_AS(gauss_lobatto_rule(-3), std::invalid_argument);
}

TEST_CASE("cardinal functions match the monomial oracle") {
  for (int K = 1; K <= 6; ++K) {
    const auto rule = gauss_lobatto_rule(K);
    const auto L = oracle::cardinal(rule.nodes);
    for (int p = 0; p <= K; ++p)
      for (double x : {0.0, 0.13, 0.5, 0.77, 1.0, 1.3}) {
        CHECK(std::abs(lagrange_eval(rule, p, x) - oracle::eval(L[p], x)) < 1e-12);
        CHECK(std::abs(lagrange_deriv(rule, p, x) - oracle::eval(oracle::deriv(L[p]), x)) < 1e-10);
      }
    const Eigen::MatrixXd d = derivative_matrix(rule);
    for (int a = 0; a <= K; ++a) CHECK(std::abs(d.row(a).sum()) < 1e-12);
  }
}

TEST_CASE("LobattoIIIA table: first row zero, last row equals the weights") {
  for (int K = 1; K <= 8; ++K) {
    const auto rule = gauss_lobatto_rule(K);
    const Eigen::MatrixXd A = integration_table(rule);
    CHECK(A.row(0).cwiseAbs().maxCoeff() == 0.0);
    CHECK((A.row(K).transpose() - rule.weights).cwiseAbs().maxCoeff() < 1e-15);
    for (int p = 0; p <= K; ++p) CHECK(std::abs(A.row(p).sum() - rule.nodes[p]) < 1e-15);
  }
}

TEST_CASE("K=1 interior stencils") {
  const OperatorSet1D o(1, 6, 1.0);
  const Eigen::MatrixXd M(o.mass()), D(o.deriv()), DI(o.deriv_int()), DDI(o.stiff_int());
  for (int g = 1; g < 6; ++g) {
    CHECK(std::abs(M(g, g) - 1.0) < 1e-14);
    CHECK(std::abs(D(g, g - 1) + 0.5) < 1e-14);
    CHECK(std::abs(D(g, g)) < 1e-14);
    CHECK(std::abs(D(g, g + 1) - 0.5) < 1e-14);
    CHECK(std::abs(DI(g, g - 1) - 0.25) < 1e-14);
    CHECK(std::abs(DI(g, g) - 0.5) < 1e-14);
    CHECK(std::abs(DI(g, g + 1) - 0.25) < 1e-14);
    CHECK(std::abs(DDI(g, g - 1) - 0.5) < 1e-14);
    CHECK(std::abs(DDI(g, g)) < 1e-14);
    CHECK(std::abs(DDI(g, g + 1) + 0.5) < 1e-14);
  }
}

TEST_CASE("assembled operators agree with the dense exact-integration oracle") {
  for (int K = 1; K <= 4; ++K)
    for (int N : {1, 3}) {
      const double delta = 0.37;
      const OperatorSet1D o(K, N, delta, -0.2);
      const auto ref = oracle::dense_operators(K, N, delta);
      CHECK(dense_max(o.mass(), ref.M) < 1e-14);
      CHECK(dense_max(o.deriv(), ref.D) < 1e-13);
      CHECK(dense_max(o.deriv_t(), ref.Dt) < 1e-13);
      CHECK(dense_max(o.stiff(), ref.DD) < 1e-11);
      CHECK((o.prefix_matrix() - ref.I).cwiseAbs().maxCoeff() < 1e-14);
      CHECK(dense_max(o.deriv_int(), ref.D * ref.I) < 1e-13);
      CHECK(dense_max(o.stiff_int(), ref.DD * ref.I) < 1e-11);
      CHECK(dense_max(o.oss_z(), ref.Z) < 1e-10);
    }
}

TEST_CASE("summation by parts and Z positivity for K <= 6, N <= 8") {
  for (int K = 1; K <= 6; ++K)
    for (int N = 1; N <= 8; ++N) {
      const OperatorSet1D o(K, N, 1.0 / N);
      const Eigen::MatrixXd D(o.deriv()), Dt(o.deriv_t()), Z(o.oss_z());
      Eigen::MatrixXd B = Eigen::MatrixXd::Zero(o.size(), o.size());
      B(0, 0) = -1;
      B(o.size() - 1, o.size() - 1) = 1;
      CHECK((D + Dt - B).cwiseAbs().maxCoeff() < 1e-12);
      CHECK((Dt - D.transpose()).cwiseAbs().maxCoeff() < 1e-15);
      // Z vanishes on a single cell, so tolerances are relative to the stiffness scale.
      const double scale = Eigen::MatrixXd(o.stiff()).cwiseAbs().maxCoeff();
      CHECK((Z - Z.transpose()).cwiseAbs().maxCoeff() < 1e-12 * scale);
      const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(Z).eigenvalues();
      CHECK(ev.minCoeff() > -1e-12 * scale);
    }
}

TEST_CASE("prefix integration is exact for degree K data and right origin differs by a constant") {
  for (int K = 1; K <= 6; ++K) {
    const OperatorSet1D o(K, 3, 0.25, 0.4);
    Eigen::VectorXd q(o.size()), exact(o.size());
    for (int g = 0; g < o.size(); ++g) {
      const double x = o.nodes()[g];
      q[g] = std::pow(x, K) - 2 * x;
      exact[g] = (std::pow(x, K + 1) - std::pow(0.4, K + 1)) / (K + 1) - (x * x - 0.16);
    }
    const Eigen::VectorXd left = o.prefix(q), right = o.prefix(q, IntegrationOrigin::right);
    CHECK((left - exact).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(std::abs(right[o.size() - 1]) < 1e-15);
    const Eigen::VectorXd diff = left - right;
    CHECK((diff.array() - diff[0]).abs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("periodic lines annihilate constants and forbid prefix") {
  const OperatorSet1D o(3, 4, 0.25, 0.0, true);
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(o.size());
  CHECK((o.deriv() * one).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((o.oss_z() * one).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(std::abs(o.norm_weights().sum() - 1.0) < 1e-14);
  CHECK(o.norm_weights()[o.size() - 1] == 0.0);
  CHECK_THROWS(o.prefix(one));
  // Skew symmetry of the folded derivative on the periodic subspace.
  Eigen::MatrixXd D(o.deriv());
  const int n = o.size() - 1;
  Eigen::MatrixXd P = D.topLeftCorner(n, n);
  P.col(0) += D.col(n).head(n);
  CHECK((P + P.transpose()).cwiseAbs().maxCoeff() < 1e-13);
}
