#pragma once
// Exponential integral E1, lower incomplete gamma, and the closed-form
// variance/covariance surrogates for dyadic frequency blocks.

#include <stdexcept>
#include <string>

namespace zc::specfun {

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

enum class E1Method { auto_select, series, continued_fraction, asymptotic };

struct E1Result {
  double value = 0.0;
  bool underflowed = false;  // e^{-x} rounded to zero, value reported as 0
  E1Method used = E1Method::auto_select;
};

// E1(x) = \int_x^\infty e^{-t}/t dt for x > 0.
//  - power series around 0 below the cutoff (default 1.0),
//  - modified-Lentz continued fraction above it,
//  - E1Method::asymptotic forces the divergent large-x expansion
//    e^{-x}/x * sum_m m!/(-x)^m (truncated at its smallest term), which is
//    only accurate for large x and exposed for exactly that comparison.
E1Result expint_e1_full(double x, E1Method method = E1Method::auto_select,
                        double series_cutoff = 1.0);
double expint_e1(double x);  // value only, throws std::domain_error for x <= 0

// Lower incomplete gamma function gamma(m, x) = \int_0^x t^{m-1} e^{-t} dt,
// m > 0, x >= 0. Series for x < m+1, otherwise Gamma(m) minus the
// continued-fraction upper tail.
double lower_gamma(double m, double x);

// Dyadic scale index n(sigma) = ceil(log2(1/(2 sigma - 1))), sigma in (1/2, 1].
int scale_n(double sigma);

// Block variance surrogate: v_k^2 = (1/2) \int_{2^{k-1}}^{2^k} e^{-(2s-1)u}/u du
// in closed E1 form. k >= 1.
double block_variance_v2(int k, double sigma);

// Block covariance surrogate
//   rho_k(delta) = (1/2) \int_{2^{k-1}}^{2^k} cos(delta u) e^{-(2s-1)u}/u du
// by oscillation-aware adaptive quadrature. Even in delta; equals
// block_variance_v2 at delta = 0 up to quadrature tolerance.
double surrogate_block_covariance(int k, double sigma, double delta);

}  // namespace zc::specfun
