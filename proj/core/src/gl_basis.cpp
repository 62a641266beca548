#include "gfsem/gl_basis.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace gfsem {
namespace {

struct Legendre {
  double p;   // P_K(x)
  double dp;  // P_K'(x)
};

// Legendre value and derivative on [-1,1] by the three-term recurrences.
Legendre legendre(int K, double x) {
  double p0 = 1.0, p1 = x;
  double d0 = 0.0, d1 = 1.0;
  if (K == 0) return {1.0, 0.0};
  for (int n = 1; n < K; ++n) {
    const double p2 = ((2 * n + 1) * x * p1 - n * p0) / (n + 1);
    const double d2 = d0 + (2 * n + 1) * p1;
    p0 = p1;
    p1 = p2;
    d0 = d1;
    d1 = d2;
  }
  return {p1, d1};
}

double legendre_dd(int K, double x, const Legendre& l) {
  return (2.0 * x * l.dp - K * (K + 1.0) * l.p) / (1.0 - x * x);
}

// Bisection on P_K' inside [a,b] where it changes sign.
double bisect_root(int K, double a, double b) {
  double fa = legendre(K, a).dp;
  for (int it = 0; it < 200 && b - a > 1e-16; ++it) {
    const double m = 0.5 * (a + b);
    const double fm = legendre(K, m).dp;
    if (fm == 0.0) return m;
    if ((fa < 0) == (fm < 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

// Interior roots of P_K' on (-1,1), ascending.
std::vector<double> interior_roots(int K) {
  std::vector<double> roots;
  bool newton_ok = true;
  for (int j = 1; j < K; ++j) {
    double x = -std::cos(M_PI * j / K);
    bool converged = false;
    for (int it = 0; it < 100; ++it) {
      const Legendre l = legendre(K, x);
      const double step = l.dp / legendre_dd(K, x, l);
      x -= step;
      if (!std::isfinite(x) || std::abs(x) >= 1.0) break;
      if (std::abs(step) < 1e-15) {
        converged = true;
        break;
      }
    }
    if (!converged || (!roots.empty() && x <= roots.back())) {
      newton_ok = false;
      break;
    }
    roots.push_back(x);
  }
  if (newton_ok) return roots;

  // Fallback: scan for sign changes on a fine grid, then bisect.
  roots.clear();
  const int samples = 200 * K;
  double a = -1.0 + 1e-12;
  double fa = legendre(K, a).dp;
  for (int s = 1; s <= samples; ++s) {
    const double b = -1.0 + 2.0 * s / samples - (s == samples ? 1e-12 : 0.0);
    const double fb = legendre(K, b).dp;
    if ((fa < 0) != (fb < 0)) roots.push_back(bisect_root(K, a, b));
    a = b;
    fa = fb;
  }
  if (static_cast<int>(roots.size()) != K - 1)
    throw std::runtime_error("Gauss-Lobatto root finding failed for K=" + std::to_string(K));
  return roots;
}

}  // namespace

GaussLobattoRule gauss_lobatto_rule(int K) {
  if (K < 1) throw std::invalid_argument("invalid polynomial degree " + std::to_string(K));

  std::vector<double> xs;
  xs.push_back(-1.0);
  for (double r : interior_roots(K)) xs.push_back(r);
  xs.push_back(1.0);

  // Enforce exact symmetry about the midpoint.
  for (int j = 0; j <= K / 2; ++j) {
    const double s = 0.5 * (xs[K - j] - xs[j]);
    xs[j] = -s;
    xs[K - j] = s;
  }
  if (K % 2 == 0) xs[K / 2] = 0.0;

  GaussLobattoRule rule;
  rule.degree = K;
  rule.nodes.resize(K + 1);
  rule.weights.resize(K + 1);
  for (int j = 0; j <= K; ++j) {
    const double pk = legendre(K, xs[j]).p;
    rule.nodes[j] = 0.5 * (xs[j] + 1.0);
    rule.weights[j] = 1.0 / (K * (K + 1.0) * pk * pk);
  }
  rule.nodes[0] = 0.0;
  rule.nodes[K] = 1.0;
  for (int j = 0; j <= K / 2; ++j) {
    const double w = 0.5 * (rule.weights[j] + rule.weights[K - j]);
    rule.weights[j] = rule.weights[K - j] = w;
  }

  rule.bary.resize(K + 1);
  for (int p = 0; p <= K; ++p) {
    double prod = 1.0;
    for (int q = 0; q <= K; ++q)
      if (q != p) prod *= rule.nodes[p] - rule.nodes[q];
    rule.bary[p] = 1.0 / prod;
  }
  return rule;
}

double lagrange_eval(const GaussLobattoRule& rule, int p, double x) {
  double v = rule.bary[p];
  for (int q = 0; q <= rule.degree; ++q)
    if (q != p) v *= x - rule.nodes[q];
  return v;
}

double lagrange_deriv(const GaussLobattoRule& rule, int p, double x) {
  double sum = 0.0;
  for (int r = 0; r <= rule.degree; ++r) {
    if (r == p) continue;
    double prod = rule.bary[p];
    for (int q = 0; q <= rule.degree; ++q)
      if (q != p && q != r) prod *= x - rule.nodes[q];
    sum += prod;
  }
  return sum;
}

Eigen::MatrixXd derivative_matrix(const GaussLobattoRule& rule) {
  const int n = rule.degree + 1;
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (int a = 0; a < n; ++a) {
    double diag = 0.0;
    for (int b = 0; b < n; ++b) {
      if (a == b) continue;
      d(a, b) = rule.bary[b] / rule.bary[a] / (rule.nodes[a] - rule.nodes[b]);
      diag -= d(a, b);
    }
    d(a, a) = diag;
  }
  return d;
}

Eigen::MatrixXd integration_table(const GaussLobattoRule& rule) {
  const int n = rule.degree + 1;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  // The n-point GL rule is exact for the degree-K integrand on any subinterval.
  for (int p = 1; p < n; ++p) {
    const double tp = rule.nodes[p];
    for (int m = 0; m < n; ++m) {
      double s = 0.0;
      for (int q = 0; q < n; ++q) s += rule.weights[q] * lagrange_eval(rule, m, tp * rule.nodes[q]);
      A(p, m) = tp * s;
    }
  }
  return A;
}

LocalBlocks build_local_blocks(const GaussLobattoRule& rule, double delta) {
  const Eigen::MatrixXd dhat = derivative_matrix(rule);
  const Eigen::MatrixXd W = rule.weights.asDiagonal();
  LocalBlocks b;
  b.mass = delta * W;
  b.deriv = W * dhat;
  b.deriv_t = b.deriv.transpose();
  b.stiff = dhat.transpose() * W * dhat / delta;
  b.integ = delta * integration_table(rule);
  b.deriv_int = b.deriv * b.integ;
  b.stiff_int = b.stiff * b.integ;
  return b;
}

OperatorSet1D::OperatorSet1D(int K, int N, double delta, double x0, bool periodic)
    : K_(K), N_(N), delta_(delta), periodic_(periodic), rule_(gauss_lobatto_rule(K)) {
  if (N < 1) throw std::invalid_argument("cell count must be positive");
  if (!(delta > 0.0)) throw std::invalid_argument("cell width must be positive");
  local_ = build_local_blocks(rule_, delta);

  const int n = size();
  nodes_.resize(n);
  for (int i = 0; i < N; ++i)
    for (int p = 0; p <= K; ++p) nodes_[i * K + p] = x0 + delta * (i + rule_.nodes[p]);
  nodes_[n - 1] = x0 + delta * N;

  Eigen::VectorXd raw_mass = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < N; ++i)
    for (int p = 0; p <= K; ++p) raw_mass[i * K + p] += local_.mass(p, p);

  mass_diag_ = raw_mass;
  norm_weights_ = raw_mass;
  if (periodic_) {
    mass_diag_[0] = mass_diag_[n - 1] = raw_mass[0] + raw_mass[n - 1];
    norm_weights_[0] = mass_diag_[0];
    norm_weights_[n - 1] = 0.0;
  }

  std::vector<Eigen::Triplet<double>> tm, tmi, ti;
  for (int g = 0; g < n; ++g) {
    tm.emplace_back(g, g, mass_diag_[g]);
    tmi.emplace_back(g, g, 1.0 / mass_diag_[g]);
    ti.emplace_back(g, g, 1.0);
  }
  mass_.resize(n, n);
  mass_.setFromTriplets(tm.begin(), tm.end());
  mass_inv_.resize(n, n);
  mass_inv_.setFromTriplets(tmi.begin(), tmi.end());
  identity_.resize(n, n);
  identity_.setFromTriplets(ti.begin(), ti.end());

  deriv_ = fold(assemble(local_.deriv));
  deriv_t_ = fold(assemble(local_.deriv_t));
  stiff_ = fold(assemble(local_.stiff));
  deriv_int_ = assemble(local_.deriv_int);
  stiff_int_ = assemble(local_.stiff_int);
  oss_z_ = LineOp(stiff_ - LineOp(deriv_t_ * LineOp(mass_inv_ * deriv_)));
  oss_z_.prune(0.0);
}

LineOp OperatorSet1D::assemble(const Eigen::MatrixXd& block) const {
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(static_cast<size_t>(N_) * (K_ + 1) * (K_ + 1));
  for (int i = 0; i < N_; ++i)
    for (int a = 0; a <= K_; ++a)
      for (int b = 0; b <= K_; ++b)
        if (block(a, b) != 0.0) t.emplace_back(i * K_ + a, i * K_ + b, block(a, b));
  LineOp m(size(), size());
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

LineOp OperatorSet1D::fold(const LineOp& raw) const {
  if (!periodic_) return raw;
  const int n = size();
  std::vector<Eigen::Triplet<double>> t;
  for (int g = 0; g < n - 1; ++g) t.emplace_back(g, g, 1.0);
  t.emplace_back(0, n - 1, 1.0);
  t.emplace_back(n - 1, 0, 1.0);
  t.emplace_back(n - 1, n - 1, 1.0);
  LineOp F(n, n);
  F.setFromTriplets(t.begin(), t.end());
  LineOp out = F * raw;
  out.prune(0.0);
  return out;
}

Eigen::VectorXd OperatorSet1D::prefix(const Eigen::VectorXd& q, IntegrationOrigin origin) const {
  if (periodic_) throw std::logic_error("prefix integration is not defined on a periodic line");
  const Eigen::MatrixXd& I = local_.integ;
  Eigen::VectorXd out(size());
  if (origin == IntegrationOrigin::left) {
    out[0] = 0.0;
    for (int i = 0; i < N_; ++i) {
      const auto qc = q.segment(i * K_, K_ + 1);
      const double base = out[i * K_];
      for (int p = 1; p <= K_; ++p) out[i * K_ + p] = base + I.row(p).dot(qc);
    }
  } else {
    out[size() - 1] = 0.0;
    for (int i = N_ - 1; i >= 0; --i) {
      const auto qc = q.segment(i * K_, K_ + 1);
      const double top = out[i * K_ + K_];
      for (int p = K_ - 1; p >= 0; --p)
        out[i * K_ + p] = top - (I.row(K_) - I.row(p)).dot(qc);
    }
  }
  return out;
}

Eigen::MatrixXd OperatorSet1D::prefix_matrix() const {
  const int n = size();
  Eigen::MatrixXd P(n, n);
  for (int c = 0; c < n; ++c) P.col(c) = prefix(Eigen::VectorXd::Unit(n, c));
  return P;
}

}  // namespace gfsem
