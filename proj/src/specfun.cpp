#include "zc/specfun.hpp"

#include <cmath>
#include <limits>

#include "zc/quadrature.hpp"

namespace zc::specfun {
namespace {

// Power series E1(x) = -gamma - ln x + sum_{k>=1} (-1)^{k+1} x^k / (k * k!).
double e1_series(double x) {
  double sum = 0.0;
  double power_term = 1.0;  // x^k / k!
  for (int k = 1; k < 80; ++k) {
    power_term *= x / k;
    const double term = (k % 2 ? power_term : -power_term) / k;
    sum += term;
    if (std::abs(term) < 1e-18 * (std::abs(sum) + 1e-300)) break;
  }
  return -kEulerGamma - std::log(x) + sum;
}

// Modified Lentz evaluation of
//   E1(x) = e^{-x} / (x + 1 - 1^2/(x + 3 - 2^2/(x + 5 - ...))).
// Returns the continued-fraction factor K with E1 = e^{-x} * (1/K).
double e1_cf_denominator(double x) {
  constexpr double tiny = 1e-300;
  double f = x + 1.0;
  if (f == 0.0) f = tiny;
  double c = f;
  double d = 0.0;
  for (int j = 1; j < 400; ++j) {
    const double a = -static_cast<double>(j) * j;
    const double b = x + 2.0 * j + 1.0;
    d = b + a * d;
    if (d == 0.0) d = tiny;
    c = b + a / c;
    if (c == 0.0) c = tiny;
    d = 1.0 / d;
    const double ratio = c * d;
    f *= ratio;
    if (std::abs(ratio - 1.0) < 1e-16) break;
  }
  return f;
}

// Truncated asymptotic expansion e^{-x}/x * sum_{m=0}^{M} m!/(-x)^m, stopped
// at the smallest term (the series diverges; this is its best accuracy).
double e1_asymptotic(double x) {
  const double prefix = std::exp(-x) / x;
  double term = 1.0;
  double sum = 1.0;
  double smallest = 1.0;
  for (int m = 1; m < 60; ++m) {
    term *= -static_cast<double>(m) / x;
    if (std::abs(term) >= smallest) break;  // divergence onset
    smallest = std::abs(term);
    sum += term;
    if (smallest < 1e-18) break;
  }
  return prefix * sum;
}

// Series for the regularized-by-hand lower gamma:
// gamma(m, x) = x^m e^{-x} sum_{k>=0} x^k / (m (m+1) ... (m+k)).
double lower_gamma_series(double m, double x) {
  if (x == 0.0) return 0.0;
  double term = 1.0 / m;
  double sum = term;
  for (int k = 1; k < 500; ++k) {
    term *= x / (m + k);
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return std::exp(m * std::log(x) - x) * sum;
}

// Continued fraction for the upper tail Gamma(m, x), Lentz form.
double upper_gamma_cf(double m, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - m;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 500; ++i) {
    const double an = -i * (i - m);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return std::exp(m * std::log(x) - x) * h;
}

}  // namespace

E1Result expint_e1_full(double x, E1Method method, double series_cutoff) {
  if (!(x > 0.0)) throw std::domain_error("expint_e1: x must be positive");
  E1Result r;
  E1Method pick = method;
  if (pick == E1Method::auto_select)
    pick = (x < series_cutoff) ? E1Method::series : E1Method::continued_fraction;
  r.used = pick;
  switch (pick) {
    case E1Method::series:
      r.value = e1_series(x);
      break;
    case E1Method::continued_fraction: {
      const double expf = std::exp(-x);
      if (expf == 0.0) {
        r.value = 0.0;
        r.underflowed = true;
      } else {
        r.value = expf / e1_cf_denominator(x);
        if (r.value == 0.0) r.underflowed = true;
      }
      break;
    }
    case E1Method::asymptotic: {
      const double expf = std::exp(-x);
      if (expf == 0.0) {
        r.value = 0.0;
        r.underflowed = true;
      } else {
        r.value = e1_asymptotic(x);
      }
      break;
    }
    case E1Method::auto_select:
      break;  // unreachable
  }
  return r;
}

double expint_e1(double x) { return expint_e1_full(x).value; }

double lower_gamma(double m, double x) {
  if (!(m > 0.0)) throw std::domain_error("lower_gamma: m must be positive");
  if (x < 0.0) throw std::domain_error("lower_gamma: x must be nonnegative");
  if (x == 0.0) return 0.0;
  if (x < m + 1.0) return lower_gamma_series(m, x);
  return std::tgamma(m) - upper_gamma_cf(m, x);
}

int scale_n(double sigma) {
  const double a = 2.0 * sigma - 1.0;
  if (!(a > 0.0) || sigma > 1.0)
    throw std::domain_error("scale_n: sigma must lie in (1/2, 1]");
  return static_cast<int>(std::ceil(std::log2(1.0 / a)));
}

double block_variance_v2(int k, double sigma) {
  if (k < 1) throw std::domain_error("block_variance_v2: k must be >= 1");
  const double a = 2.0 * sigma - 1.0;
  if (!(a > 0.0)) throw std::domain_error("block_variance_v2: sigma must exceed 1/2");
  const double lo = a * std::exp2(k - 1);
  const double hi = a * std::exp2(k);
  const E1Result e_lo = expint_e1_full(lo);
  if (e_lo.underflowed || e_lo.value == 0.0) return 0.0;
  const E1Result e_hi = expint_e1_full(hi);
  return 0.5 * (e_lo.value - e_hi.value);
}

double surrogate_block_covariance(int k, double sigma, double delta) {
  if (k < 1) throw std::domain_error("surrogate_block_covariance: k must be >= 1");
  const double a = 2.0 * sigma - 1.0;
  if (!(a > 0.0))
    throw std::domain_error("surrogate_block_covariance: sigma must exceed 1/2");
  delta = std::abs(delta);  // even in the lag by construction
  const double lo = std::exp2(k - 1);
  const double hi = std::exp2(k);
  if (a * lo > 740.0) return 0.0;  // integrand underflows everywhere
  auto g = [a](double u) { return std::exp(-a * u) / u; };
  auto env_tail = [a](double u) {  // bound on |integral of g over [u, hi]|
    return expint_e1_full(a * u).value;
  };
  return 0.5 * quad::integrate_oscillatory_cos(g, delta, lo, hi, env_tail, 1e-14, 1e-16);
}

}  // namespace zc::specfun
