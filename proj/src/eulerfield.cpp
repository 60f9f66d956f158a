#include "zc/eulerfield.hpp"

#include <algorithm>
#include <cmath>

#include "zc/fftutil.hpp"
#include "zc/quadrature.hpp"
#include "zc/rng.hpp"
#include "zc/specfun.hpp"
#include "zc/util.hpp"

namespace zc::field {
namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Add alpha*cos(w h_j) + beta*sin(w h_j) for h_j = h0 + j*dh, j = 0..m-1,
// via a complex rotation recurrence (phase drift ~ m*eps, negligible here).
void add_tone(std::vector<double>& out, double alpha, double beta, double w,
              double h0, double dh) {
  double c = std::cos(w * h0);
  double s = std::sin(w * h0);
  const double cd = std::cos(w * dh);
  const double sd = std::sin(w * dh);
  for (double& v : out) {
    v += alpha * c + beta * s;
    const double cn = c * cd - s * sd;
    s = s * cd + c * sd;
    c = cn;
  }
}

// Per-prime coefficients (alpha, beta) so the contribution is
// alpha*cos(h ln p) + beta*sin(h ln p).
inline void prime_coeffs(rng::Stream& st, WeightModel wm, double amp, double& alpha,
                         double& beta) {
  if (wm == WeightModel::uniform_circle) {
    const double phase = kTwoPi * st.uniform01();
    alpha = amp * std::cos(phase);
    beta = amp * std::sin(phase);
  } else {
    // complex Gaussian mark, E|W|^2 = 1
    const auto z = st.complex_gaussian();
    alpha = amp * z.real();
    beta = amp * z.imag();
  }
}

// Evaluate one exact block on an arbitrary uniform grid h0 + j*dh.
std::vector<double> exact_block_on_grid(int k, double sigma, std::size_t m, double h0,
                                        double dh, std::uint64_t seed,
                                        std::uint64_t replica, WeightModel wm) {
  const primes::PrimeBlock& b = primes::block(k);
  std::vector<double> out(m, 0.0);
  for (std::size_t i = 0; i < b.p.size(); ++i) {
    rng::Stream st(seed, rng::Dom::theta, replica, static_cast<std::uint64_t>(k), i);
    const double lp = b.logp[i];
    const double amp = std::exp(-sigma * lp);
    double alpha, beta;
    prime_coeffs(st, wm, amp, alpha, beta);
    add_tone(out, alpha, beta, lp, h0, dh);
  }
  return out;
}

// Catmull-Rom interpolation from a uniform coarse grid (with two ghost points
// on each side) to the fine grid.
void catmull_rom_add(std::vector<double>& fine, const std::vector<double>& coarse,
                     double coarse_h0, double coarse_dh, double fine_dh) {
  const std::size_t m = fine.size();
  for (std::size_t j = 0; j < m; ++j) {
    const double h = static_cast<double>(j) * fine_dh;
    double t = (h - coarse_h0) / coarse_dh;
    std::size_t i1 = static_cast<std::size_t>(t);
    if (i1 + 2 >= coarse.size()) i1 = coarse.size() - 3;
    if (i1 < 1) i1 = 1;
    const double u = t - static_cast<double>(i1);
    const double p0 = coarse[i1 - 1], p1 = coarse[i1], p2 = coarse[i1 + 1],
                 p3 = coarse[i1 + 2];
    fine[j] += 0.5 * (2.0 * p1 + u * (p2 - p0 +
                      u * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 +
                      u * (3.0 * (p1 - p2) + p3 - p0))));
  }
}

// Shared surrogate-mode machinery. Frequency panels are aligned to multiples
// of dw = 2*pi/(n_fft*dh); panel q carries the closed-form mass of the block
// spectral density over [q dw, (q+1) dw] clipped to the block, assigned to the
// midpoint frequency (q + 1/2) dw. n_fft is a power of two chosen so that
// dw <= 0.1, keeping the lag-domain discretization bias O((delta*dw)^2/24)
// orders below every statistical tolerance in use.
std::size_t fft_size_for(std::size_t m, double dh) {
  const double target = kTwoPi / (0.1 * dh);
  std::size_t n = 1;
  while (static_cast<double>(n) < target) n <<= 1;
  (void)m;
  return n;
}

struct ModePanel {
  std::uint64_t q;
  double mass;
};

// Panel masses for block k; nonnegative analytically, clipped per contract.
std::vector<ModePanel> block_panels(int k, double sigma, double dw, double clip_tol) {
  const double a = 2.0 * sigma - 1.0;
  const double u_lo = std::exp2(k - 1);
  const double u_hi = std::exp2(k);
  std::vector<ModePanel> panels;
  if (a * u_lo > 740.0) return panels;  // spectrum underflows entirely
  const auto q0 = static_cast<std::uint64_t>(std::floor(u_lo / dw));
  const auto q1 = static_cast<std::uint64_t>(std::floor(u_hi / dw));
  panels.reserve(static_cast<std::size_t>(q1 - q0 + 1));
  double e1_left = specfun::expint_e1_full(a * u_lo).value;
  double worst = 0.0;
  for (std::uint64_t q = q0; q <= q1; ++q) {
    const double lo = std::max(u_lo, static_cast<double>(q) * dw);
    const double hi = std::min(u_hi, static_cast<double>(q + 1) * dw);
    if (!(hi > lo)) continue;
    const double e1_right =
        (a * hi > 740.0) ? 0.0 : specfun::expint_e1_full(a * hi).value;
    double mass = 0.5 * (e1_left - e1_right);
    e1_left = e1_right;
    if (mass < 0.0) {
      worst = std::min(worst, mass);
      if (mass < -clip_tol) throw EmbeddingError(k, sigma, worst);
      mass = 0.0;
    }
    panels.push_back({q, mass});
  }
  return panels;
}

// Draw the complex mode amplitude for panel q of block k.
inline std::complex<double> draw_mode(std::uint64_t seed, std::uint64_t replica, int k,
                                      std::uint64_t q, double mass) {
  rng::Stream st(seed, rng::Dom::surrogate, replica, static_cast<std::uint64_t>(k), q);
  const double sd = std::sqrt(mass);
  const double a = sd * st.normal();
  const double b = sd * st.normal();
  return {a, -b};
}

// Synthesize accumulated modes onto the grid. spec holds sum of amplitudes at
// bins q mod n_fft; values_j += Re(F_j * exp(i*pi*j/n_fft)) where F is the
// unnormalized backward FFT (the half-bin phase recenters panel midpoints).
void synthesize_modes(std::vector<double>& values, std::vector<std::complex<double>>& spec) {
  const std::size_t n_fft = spec.size();
  fft::c2c_backward(spec);
  for (std::size_t j = 0; j < values.size(); ++j) {
    const double psi = M_PI * static_cast<double>(j) / static_cast<double>(n_fft);
    values[j] += spec[j].real() * std::cos(psi) - spec[j].imag() * std::sin(psi);
  }
}

// Direct (non-FFT) synthesis for small mode counts.
void synthesize_modes_direct(std::vector<double>& values,
                             const std::vector<ModePanel>& panels, double dw, double dh,
                             std::uint64_t seed, std::uint64_t replica, int k) {
  for (const ModePanel& pan : panels) {
    const auto z = draw_mode(seed, replica, k, pan.q, pan.mass);
    const double w = (static_cast<double>(pan.q) + 0.5) * dw;
    add_tone(values, z.real(), -z.imag(), w, 0.0, dh);
  }
}

constexpr std::size_t kDirectModeLimit = 512;

}  // namespace

std::vector<double> h_grid(std::size_t m) {
  if (m < 2) throw std::domain_error("h_grid: need at least 2 points");
  std::vector<double> h(m);
  const double dh = 1.0 / static_cast<double>(m - 1);
  for (std::size_t j = 0; j < m; ++j) h[j] = static_cast<double>(j) * dh;
  return h;
}

BlockFieldSample sample_exact_block(int k, double sigma, std::size_t m,
                                    std::uint64_t seed, std::uint64_t replica,
                                    WeightModel weights) {
  if (m < 2) throw std::domain_error("sample_exact_block: need at least 2 grid points");
  const primes::PrimeBlock& b = primes::block(k);  // validates k
  BlockFieldSample out;
  out.k = k;
  out.origin = BlockOrigin::exact;
  const double dh = 1.0 / static_cast<double>(m - 1);

  // Large blocks on fine grids: evaluate on a x32-oversampled coarse grid
  // (the block is band-limited to |w| <= 2^k) and cubic-interpolate.
  const double w_max = std::exp2(k);
  const std::size_t coarse_pts =
      static_cast<std::size_t>(std::ceil(32.0 * w_max / M_PI)) + 1;
  if (b.p.size() > 10000 && m > 4 * coarse_pts) {
    const double cdh = 1.0 / static_cast<double>(coarse_pts - 1);
    const double ch0 = -2.0 * cdh;
    const std::vector<double> coarse = exact_block_on_grid(
        k, sigma, coarse_pts + 4, ch0, cdh, seed, replica, weights);
    out.values.assign(m, 0.0);
    catmull_rom_add(out.values, coarse, ch0, cdh, dh);
  } else {
    out.values = exact_block_on_grid(k, sigma, m, 0.0, dh, seed, replica, weights);
  }
  return out;
}

BlockFieldSample sample_surrogate_block(int k, double sigma, std::size_t m,
                                        std::uint64_t seed, std::uint64_t replica,
                                        double clip_tol) {
  if (k < 1) throw std::domain_error("sample_surrogate_block: k must be >= 1");
  if (m < 2)
    throw std::domain_error("sample_surrogate_block: need at least 2 grid points");
  if (!(sigma > 0.5)) throw std::domain_error("sample_surrogate_block: sigma > 1/2");
  BlockFieldSample out;
  out.k = k;
  out.origin = BlockOrigin::surrogate;
  out.values.assign(m, 0.0);
  const double dh = 1.0 / static_cast<double>(m - 1);
  const std::size_t n_fft = fft_size_for(m, dh);
  const double dw = kTwoPi / (static_cast<double>(n_fft) * dh);
  const std::vector<ModePanel> panels = block_panels(k, sigma, dw, clip_tol);
  if (panels.empty()) return out;
  if (panels.size() <= kDirectModeLimit) {
    synthesize_modes_direct(out.values, panels, dw, dh, seed, replica, k);
  } else {
    std::vector<std::complex<double>> spec(n_fft, {0.0, 0.0});
    for (const ModePanel& pan : panels)
      spec[static_cast<std::size_t>(pan.q % n_fft)] +=
          draw_mode(seed, replica, k, pan.q, pan.mass);
    synthesize_modes(out.values, spec);
  }
  return out;
}

FieldSample sample_field(double sigma, std::size_t m, std::uint64_t seed,
                         std::uint64_t replica, int k0, int k_top, int tail_blocks,
                         WeightModel weights) {
  if (m < 2) throw std::domain_error("sample_field: need at least 2 grid points");
  if (k0 < 0) throw std::domain_error("sample_field: k0 must be >= 0");
  if (k0 > primes::kMaxBlock) throw primes::CapacityError(k0);
  FieldSample out;
  out.sigma = sigma;
  out.n = specfun::scale_n(sigma);
  out.k0 = k0;
  out.k_top = (k_top < 0) ? out.n + tail_blocks : k_top;
  if (out.k_top < 1) throw std::domain_error("sample_field: k_top must be >= 1");
  out.seed = seed;
  out.replica = replica;
  out.weights = weights;
  out.values.assign(m, 0.0);

  const double dh = 1.0 / static_cast<double>(m - 1);

  // Exact part: block 0 ({2}) always, then blocks 1..k0.
  const int exact_top = std::min(k0, out.k_top);
  for (int k = 0; k <= exact_top; ++k) {
    const BlockFieldSample bs = sample_exact_block(k, sigma, m, seed, replica, weights);
    for (std::size_t j = 0; j < m; ++j) out.values[j] += bs.values[j];
  }

  // Surrogate part: one shared synthesis pass over all deep blocks.
  if (out.k_top > k0) {
    const std::size_t n_fft = fft_size_for(m, dh);
    const double dw = kTwoPi / (static_cast<double>(n_fft) * dh);
    std::vector<ModePanel> all;
    std::vector<int> panel_block;
    for (int k = std::max(1, k0 + 1); k <= out.k_top; ++k) {
      const std::vector<ModePanel> panels = block_panels(k, sigma, dw, 1e-8);
      for (const ModePanel& pan : panels) {
        all.push_back(pan);
        panel_block.push_back(k);
      }
    }
    if (!all.empty()) {
      if (all.size() <= kDirectModeLimit) {
        for (std::size_t i = 0; i < all.size(); ++i) {
          const auto z =
              draw_mode(seed, replica, panel_block[i], all[i].q, all[i].mass);
          const double w = (static_cast<double>(all[i].q) + 0.5) * dw;
          add_tone(out.values, z.real(), -z.imag(), w, 0.0, dh);
        }
      } else {
        std::vector<std::complex<double>> spec(n_fft, {0.0, 0.0});
        for (std::size_t i = 0; i < all.size(); ++i)
          spec[static_cast<std::size_t>(all[i].q % n_fft)] +=
              draw_mode(seed, replica, panel_block[i], all[i].q, all[i].mass);
        synthesize_modes(out.values, spec);
      }
    }
  }
  return out;
}

double bessel_i0_series(double x) {
  const double y = 0.25 * x * x;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    term *= y / (static_cast<double>(k) * k);
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum;
}

LaplaceReport laplace_check(std::uint64_t p, double sigma, double lambda, int replicas,
                            std::uint64_t seed) {
  if (replicas < 2) throw std::domain_error("laplace_check: need at least 2 replicas");
  LaplaceReport r;
  r.p = p;
  r.sigma = sigma;
  r.lambda = lambda;
  const double amp = std::pow(static_cast<double>(p), -sigma);
  rng::Stream st(seed, rng::Dom::laplace, p);
  util::KahanAcc acc, acc2;
  for (int i = 0; i < replicas; ++i) {
    const double v = std::exp(lambda * amp * std::cos(kTwoPi * st.uniform01()));
    acc.add(v);
    acc2.add(v * v);
  }
  const double n = static_cast<double>(replicas);
  r.mc_mean = acc.value() / n;
  const double var = std::max(0.0, acc2.value() / n - r.mc_mean * r.mc_mean);
  r.mc_se = std::sqrt(var / n);
  r.series_value = bessel_i0_series(lambda * amp);
  r.z_score = (r.mc_mean - r.series_value) / (r.mc_se > 0.0 ? r.mc_se : 1.0);
  return r;
}

double halfplane_covariance(std::complex<double> s1, std::complex<double> s2) {
  const double a = s1.real() + s2.real() - 1.0;
  if (!(a > 0.0))
    throw std::domain_error("halfplane_covariance: Re s1 + Re s2 must exceed 1");
  const double delta = s1.imag() - s2.imag();
  const double expo = s1.real() + s2.real();
  util::KahanAcc acc;
  for (int k = 0; k <= primes::kMaxBlock; ++k) {
    const primes::PrimeBlock& b = primes::block(k);
    for (const double lp : b.logp)
      acc.add(std::cos(delta * lp) * std::exp(-expo * lp));
  }
  // Prime-density tail above exp(16).
  const double u_end = std::max(16.5, 45.0 / a);
  auto g = [a](double u) { return std::exp(-a * u) / u; };
  auto env = [a](double u) { return specfun::expint_e1_full(a * u).value; };
  const double tail = quad::integrate_oscillatory_cos(g, delta, 16.0, u_end, env, 1e-14, 1e-16);
  return 0.5 * (acc.value() + tail);
}

}  // namespace zc::field
