#pragma once
// Adaptive Gauss-Legendre quadrature, plus an oscillatory-integrand variant
// that splits panels at the zeros of cos(delta*u) and truncates once the
// exponential envelope of the remaining tail is negligible.

#include <functional>
#include <stdexcept>

namespace zc::quad {

struct QuadratureError : std::runtime_error {
  explicit QuadratureError(const std::string& what) : std::runtime_error(what) {}
};

// Integral of f over [a, b], bisection-adaptive with a 12-point Gauss-Legendre
// rule per panel. abs_tol is an absolute tolerance on the whole integral.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-13, int max_depth = 48);

// Integral of cos(delta*u) * g(u) over [a, b] where g is smooth, positive and
// decaying with envelope bound env(u) >= |g| nonincreasing. Panels follow the
// half-periods of the cosine; integration stops early when env(u)/delta says
// the remaining tail is below tail_tol. For delta == 0 this is integrate(g).
double integrate_oscillatory_cos(const std::function<double(double)>& g, double delta,
                                 double a, double b,
                                 const std::function<double(double)>& envelope_tail,
                                 double abs_tol = 1e-13, double tail_tol = 1e-15);

}  // namespace zc::quad
