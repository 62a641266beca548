#pragma once

#include <cmath>

namespace gfsem {

/** Forward-mode number carrying d/dx and d/dy, enough for exact-solution gradients. */
struct Dual {
  double v = 0.0, dx = 0.0, dy = 0.0;

  Dual() = default;
  Dual(double value) : v(value) {}  // NOLINT: implicit constants are convenient here
  Dual(double value, double gx, double gy) : v(value), dx(gx), dy(gy) {}

  static Dual var_x(double x) { return {x, 1.0, 0.0}; }
  static Dual var_y(double y) { return {y, 0.0, 1.0}; }
};

inline Dual operator+(Dual a, Dual b) { return {a.v + b.v, a.dx + b.dx, a.dy + b.dy}; }
inline Dual operator-(Dual a, Dual b) { return {a.v - b.v, a.dx - b.dx, a.dy - b.dy}; }
inline Dual operator-(Dual a) { return {-a.v, -a.dx, -a.dy}; }
inline Dual operator*(Dual a, Dual b) {
  return {a.v * b.v, a.dx * b.v + a.v * b.dx, a.dy * b.v + a.v * b.dy};
}
inline Dual operator/(Dual a, Dual b) {
  const double inv = 1.0 / b.v;
  return {a.v * inv, (a.dx - a.v * inv * b.dx) * inv, (a.dy - a.v * inv * b.dy) * inv};
}
inline Dual exp(Dual a) {
  const double e = std::exp(a.v);
  return {e, e * a.dx, e * a.dy};
}
inline Dual sin(Dual a) {
  const double c = std::cos(a.v);
  return {std::sin(a.v), c * a.dx, c * a.dy};
}
inline Dual cos(Dual a) {
  const double s = std::sin(a.v);
  return {std::cos(a.v), -s * a.dx, -s * a.dy};
}

inline double exp(double a) { return std::exp(a); }
inline double sin(double a) { return std::sin(a); }
inline double cos(double a) { return std::cos(a); }

inline double value_of(double a) { return a; }
inline double value_of(const Dual& a) { return a.v; }

}  // namespace gfsem
