#pragma once
// Holomorphic Gaussian field on the unit disc, sampled on circles, and its
// multiplicative chaos. The boundary trace at radius r is
//   U_r(theta) = sum_{m>=1} r^m / sqrt(2m) * (V_m cos m theta + W_m sin m theta),
// V, W iid standard normal, i.e. U = Re G with G(z) = sum_m G_m z^m / sqrt(m)
// and standard complex Gaussian G_m. Mode m's draw depends only on
// (seed, replica, m), so refining the grid or the truncation keeps the
// underlying realization.

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace zc::disc {

// Smallest truncation M with amplitude envelope r^M / sqrt(M) < mode_tol.
int modes_for(double r, double mode_tol = 1e-8);

struct CircleFieldSample {
  double r = 0.0;
  int n_modes = 0;
  std::uint64_t seed = 0;
  std::uint64_t replica = 0;
  std::vector<double> values;   // U(theta_j), theta_j = 2 pi j / M, j = 0..M-1
  double truncated_var = 0.0;   // exact E U^2 of the truncation: 1/2 sum r^{2m}/m
  double coeff_quadratic = 0.0; // sum_m (a_m^2 + b_m^2)/2 of the realized draw
};

// Sample on an even grid of m_grid points; requires m_grid >= 2 * n_modes
// (otherwise the truncation does not fit below Nyquist and the synthesis
// would alias).
CircleFieldSample sample_disc_field(double r, std::size_t m_grid, std::uint64_t seed,
                                    std::uint64_t replica, double mode_tol = 1e-8);

// Same draws, but also the harmonic conjugate (Im G) on the same grid.
struct ComplexCircleSample {
  CircleFieldSample re;
  std::vector<double> im;
};
ComplexCircleSample sample_disc_field_complex(double r, std::size_t m_grid,
                                              std::uint64_t seed, std::uint64_t replica,
                                              double mode_tol = 1e-8);

// Pointwise covariance E U(z) U(z2) = -1/2 ln|1 - z conj(z2)| for |z|,|z2| < 1.
double disc_covariance(std::complex<double> z, std::complex<double> z2);

// Normalized chaos mass (1/2pi) \int exp(beta U - beta^2/2 E U^2) dtheta with
// the exact truncated E U^2 carried by the sample. Subcritical domain
// beta in (0, 2); outside it throws std::domain_error. E mass = 1.
double gmc_mass(const CircleFieldSample& sample, double beta);

// Maximum of the sampled field over the grid.
double max_statistic(const CircleFieldSample& sample);

// Derivative blow-up diagnostic (1 - r) |G'(r)| at a real point, fresh draws.
double bp_ratio_disc(double r, std::uint64_t seed, std::uint64_t replica);

// Closed form Var((1-r) Re G'(r)) = 1/2 (1-r)^2/(1-r^2)^2 = 1/(2 (1+r)^2).
double bp_ratio_var_closed_form(double r);

}  // namespace zc::disc
