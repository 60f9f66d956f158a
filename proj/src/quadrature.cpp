#include "zc/quadrature.hpp"

#include <array>
#include <cmath>
#include <vector>

namespace zc::quad {
namespace {

constexpr int kGlOrder = 12;

struct GlRule {
  std::array<double, kGlOrder> x{};  // nodes on [-1, 1]
  std::array<double, kGlOrder> w{};
  GlRule() {
    // Newton iteration on Legendre P_n; standard cosine initial guess.
    const int n = kGlOrder;
    for (int i = 0; i < (n + 1) / 2; ++i) {
      double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
      double pp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0, p1 = 0.0;
        for (int j = 0; j < n; ++j) {
          const double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
        }
        pp = n * (z * p0 - p1) / (z * z - 1.0);
        const double dz = p0 / pp;
        z -= dz;
        if (std::abs(dz) < 1e-16) break;
      }
      x[i] = -z;
      x[n - 1 - i] = z;
      w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
      w[n - 1 - i] = w[i];
    }
  }
};

const GlRule& rule() {
  static const GlRule r;
  return r;
}

double gl_panel(const std::function<double(double)>& f, double a, double b) {
  const GlRule& r = rule();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double acc = 0.0;
  for (int i = 0; i < kGlOrder; ++i) acc += r.w[i] * f(mid + half * r.x[i]);
  return acc * half;
}

double adapt(const std::function<double(double)>& f, double a, double b, double whole,
             double tol, int depth) {
  const double mid = 0.5 * (a + b);
  const double left = gl_panel(f, a, mid);
  const double right = gl_panel(f, mid, b);
  const double delta = left + right - whole;
  // Absolute budget for this panel, with a floating-point floor: once the
  // refinement difference is at rounding level relative to the panel mass,
  // further splitting only accumulates noise.
  const double scale = std::abs(left) + std::abs(right);
  if (std::abs(delta) <= tol || std::abs(delta) <= 1e-14 * scale || depth <= 0) {
    if (depth <= 0 && std::abs(delta) > std::max(tol * 16.0, 1e-12 * scale))
      throw QuadratureError("adaptive quadrature failed to converge");
    return left + right;
  }
  return adapt(f, a, mid, left, 0.5 * tol, depth - 1) +
         adapt(f, mid, b, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol, int max_depth) {
  if (a == b) return 0.0;
  return adapt(f, a, b, gl_panel(f, a, b), abs_tol, max_depth);
}

double integrate_oscillatory_cos(const std::function<double(double)>& g, double delta,
                                 double a, double b,
                                 const std::function<double(double)>& envelope_tail,
                                 double abs_tol, double tail_tol) {
  delta = std::abs(delta);
  auto fg = [&](double u) { return std::cos(delta * u) * g(u); };
  if (delta * (b - a) < M_PI) return integrate(fg, a, b, abs_tol);

  // Panel boundaries at the zeros of cos(delta*u): u = (pi/2 + k*pi)/delta.
  const double half_period = M_PI / delta;
  double first = (std::floor((a * delta - M_PI_2) / M_PI) + 1.0) * M_PI / delta + M_PI_2 / delta;
  if (first <= a) first += half_period;

  double total = 0.0, comp = 0.0;
  auto kadd = [&](double v) {
    const double y = v - comp;
    const double t = total + y;
    comp = (t - total) - y;
    total = t;
  };

  double lo = a;
  double hi = std::min(first, b);
  while (lo < b) {
    kadd(integrate(fg, lo, hi, abs_tol));
    if (hi >= b) break;
    // Once the decaying envelope of everything past `hi` is negligible the
    // alternating half-period contributions can be dropped.
    if (envelope_tail && envelope_tail(hi) / delta < tail_tol) break;
    lo = hi;
    hi = std::min(hi + half_period, b);
  }
  return total;
}

}  // namespace zc::quad
