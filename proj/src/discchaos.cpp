#include "zc/discchaos.hpp"

#include <cmath>

#include "zc/fftutil.hpp"
#include "zc/rng.hpp"
#include "zc/util.hpp"

namespace zc::disc {
namespace {

constexpr std::uint64_t kModeChunk = 4096;  // draws per substream

// Fill per-mode complex coefficients c_m = amp_m (V_m - i W_m)/2 for
// m = 1..n_modes into `half`, and accumulate the quadratic functionals.
// dom distinguishes independent uses of the mode draws.
void draw_coefficients(std::vector<std::complex<double>>& half, double r, int n_modes,
                       std::uint64_t seed, std::uint64_t replica,
                       double& truncated_var, double& coeff_quadratic) {
  util::KahanAcc var_acc, quad_acc;
  const double log_r = std::log(r);
  double rm = 1.0;
  rng::Stream st(seed, rng::Dom::disc_modes, replica, 0);
  for (int m = 1; m <= n_modes; ++m) {
    if (static_cast<std::uint64_t>(m) % kModeChunk == 0)
      st = rng::Stream(seed, rng::Dom::disc_modes, replica,
                       static_cast<std::uint64_t>(m) / kModeChunk);
    if (m % 512 == 0)
      rm = std::exp(static_cast<double>(m - 1) * log_r);  // kill drift
    rm *= r;
    const double amp = rm / std::sqrt(2.0 * static_cast<double>(m));
    const double v = st.normal();
    const double w = st.normal();
    half[static_cast<std::size_t>(m)] = {0.5 * amp * v, -0.5 * amp * w};
    var_acc.add(0.5 * rm * rm / static_cast<double>(m));
    quad_acc.add(0.5 * amp * amp * (v * v + w * w));
  }
  truncated_var = var_acc.value();
  coeff_quadratic = quad_acc.value();
}

}  // namespace

int modes_for(double r, double mode_tol) {
  if (!(r > 0.0) || r >= 1.0) throw std::domain_error("modes_for: r must be in (0,1)");
  if (!(mode_tol > 0.0)) throw std::domain_error("modes_for: mode_tol must be > 0");
  // amplitude envelope r^m / sqrt(m), decreasing in m
  const double log_r = std::log(r);
  std::int64_t lo = 1, hi = 1;
  auto small_enough = [&](std::int64_t m) {
    const double md = static_cast<double>(m);
    return md * log_r - 0.5 * std::log(md) < std::log(mode_tol);
  };
  while (!small_enough(hi)) {
    hi *= 2;
    if (hi > (1ll << 40)) throw std::domain_error("modes_for: r too close to 1");
  }
  while (lo < hi) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (small_enough(mid))
      hi = mid;
    else
      lo = mid + 1;
  }
  return static_cast<int>(lo);
}

CircleFieldSample sample_disc_field(double r, std::size_t m_grid, std::uint64_t seed,
                                    std::uint64_t replica, double mode_tol) {
  CircleFieldSample s;
  s.r = r;
  s.n_modes = modes_for(r, mode_tol);
  s.seed = seed;
  s.replica = replica;
  if (m_grid < 2 || m_grid % 2 != 0)
    throw std::invalid_argument("sample_disc_field: grid must be even and >= 2");
  if (m_grid / 2 <= static_cast<std::size_t>(s.n_modes))
    throw std::invalid_argument(
        "sample_disc_field: grid of " + std::to_string(m_grid) +
        " points cannot carry " + std::to_string(s.n_modes) +
        " modes without aliasing (need more than 2 * n_modes)");
  std::vector<std::complex<double>> half(m_grid / 2 + 1, {0.0, 0.0});
  draw_coefficients(half, r, s.n_modes, seed, replica, s.truncated_var,
                    s.coeff_quadratic);
  s.values = fft::c2r_backward(half, m_grid);
  return s;
}

ComplexCircleSample sample_disc_field_complex(double r, std::size_t m_grid,
                                              std::uint64_t seed, std::uint64_t replica,
                                              double mode_tol) {
  ComplexCircleSample out;
  out.re = sample_disc_field(r, m_grid, seed, replica, mode_tol);
  // Harmonic conjugate shares the draws: coefficients pick up a factor -i.
  std::vector<std::complex<double>> half(m_grid / 2 + 1, {0.0, 0.0});
  double dummy_var = 0.0, dummy_quad = 0.0;
  draw_coefficients(half, r, out.re.n_modes, seed, replica, dummy_var, dummy_quad);
  for (auto& c : half) c = std::complex<double>(c.imag(), -c.real());  // c *= -i
  out.im = fft::c2r_backward(half, m_grid);
  return out;
}

double disc_covariance(std::complex<double> z, std::complex<double> z2) {
  if (std::abs(z) >= 1.0 || std::abs(z2) >= 1.0)
    throw std::domain_error("disc_covariance: both points must lie inside the disc");
  const std::complex<double> w = z * std::conj(z2);
  return -0.5 * std::log(std::abs(1.0 - w));
}

double gmc_mass(const CircleFieldSample& sample, double beta) {
  if (!(beta > 0.0) || beta >= 2.0)
    throw std::domain_error("gmc_mass: beta must lie in the subcritical range (0, 2)");
  if (sample.values.empty()) throw std::invalid_argument("gmc_mass: empty sample");
  // log-sum-exp over the grid, then normalize: mean_j exp(beta U_j) times
  // exp(-beta^2/2 * E U^2) with the sample's exact truncated variance.
  double peak = sample.values[0];
  for (const double v : sample.values) peak = std::max(peak, v);
  util::KahanAcc acc;
  for (const double v : sample.values) acc.add(std::exp(beta * (v - peak)));
  const double log_mean =
      beta * peak + std::log(acc.value() / static_cast<double>(sample.values.size()));
  return std::exp(log_mean - 0.5 * beta * beta * sample.truncated_var);
}

double max_statistic(const CircleFieldSample& sample) {
  if (sample.values.empty()) throw std::invalid_argument("max_statistic: empty sample");
  double peak = sample.values[0];
  for (const double v : sample.values) peak = std::max(peak, v);
  return peak;
}

double bp_ratio_disc(double r, std::uint64_t seed, std::uint64_t replica) {
  if (!(r > 0.0) || r >= 1.0) throw std::domain_error("bp_ratio_disc: r must be in (0,1)");
  // G'(r) = sum_m sqrt(m) G_m r^{m-1}; truncate once the variance tail
  // sum_{m>M} m r^{2(m-1)} is negligible against 1/(1-r^2)^2.
  const int n_modes = std::max(256, static_cast<int>(std::ceil(30.0 / (1.0 - r))));
  const double log_r = std::log(r);
  double rm = 1.0;  // r^{m-1}
  std::complex<double> sum{0.0, 0.0};
  rng::Stream st(seed, rng::Dom::bp_disc, replica, 0);
  for (int m = 1; m <= n_modes; ++m) {
    if (static_cast<std::uint64_t>(m) % kModeChunk == 0)
      st = rng::Stream(seed, rng::Dom::bp_disc, replica,
                       static_cast<std::uint64_t>(m) / kModeChunk);
    if (m % 512 == 0) rm = std::exp(static_cast<double>(m - 1) * log_r);
    sum += std::sqrt(static_cast<double>(m)) * rm * st.complex_gaussian();
    rm *= r;
  }
  return (1.0 - r) * std::abs(sum);
}

double bp_ratio_var_closed_form(double r) { return 0.5 / ((1.0 + r) * (1.0 + r)); }

}  // namespace zc::disc
