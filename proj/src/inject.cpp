#include "zc/inject.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "zc/primes.hpp"
#include "zc/rng.hpp"
#include "zc/specfun.hpp"
#include "zc/stats.hpp"
#include "zc/util.hpp"

namespace zc::inject {
namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Variance of the complex surrogate for block k at weight a = 2 sigma - 1:
// \int_{2^{k-1}}^{2^k} u e^{-a u} du = a^{-2} [g2(a 2^k) - g2(a 2^{k-1})].
double surrogate_block_moment(int k, double a) {
  const double lo = a * std::exp2(k - 1);
  const double hi = a * std::exp2(k);
  if (lo > 740.0) return 0.0;
  return (specfun::lower_gamma(2.0, hi) - specfun::lower_gamma(2.0, lo)) / (a * a);
}

// Dense lower-triangular Cholesky; matrix must be symmetric positive definite.
std::vector<double> cholesky(const std::vector<double>& m, std::size_t n) {
  std::vector<double> l(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = m[i * n + j];
      for (std::size_t k = 0; k < j; ++k) s -= l[i * n + k] * l[j * n + k];
      if (i == j) {
        if (!(s > 0.0))
          throw std::runtime_error("cholesky: matrix not positive definite");
        l[i * n + i] = std::sqrt(s);
      } else {
        l[i * n + j] = s / l[j * n + j];
      }
    }
  }
  return l;
}

}  // namespace

double euler_stage_second_moment_surrogate(int j) {
  if (j < 1) throw std::domain_error("stage index must be >= 1");
  const int n = 5 * j - 3;
  const double a = std::exp2(-n);
  // (sigma - 1/2)^2 * sum over the window of surrogate moments telescopes to
  // (1/4)[g2(a 2^{5j}) - g2(a 2^{5(j-1)})] with a 2^{5j} = 2^3, a 2^{5j-5} = 2^-2.
  const double qs = 0.25;  // ((sigma-1/2) / (a/2))^2 * 1/4 = 1/4 exactly
  return qs * (specfun::lower_gamma(2.0, a * std::exp2(5 * j)) -
               specfun::lower_gamma(2.0, a * std::exp2(5 * (j - 1))));
}

BlowupSeries bp_series_euler(int stages, std::uint64_t seed, std::uint64_t replica,
                             int k0, field::WeightModel weights) {
  if (stages < 1 || stages > 100)
    throw std::domain_error("bp_series_euler: stages must be in 1..100");
  if (k0 < 0 || k0 > primes::kMaxBlock)
    throw std::domain_error("bp_series_euler: k0 must be in 0..4");
  BlowupSeries bs;
  bs.model = Model::euler;
  bs.seed = seed;
  bs.replica = replica;
  double run_max = 0.0;
  for (int j = 1; j <= stages; ++j) {
    const int n = 5 * j - 3;
    const double sigma = 0.5 + std::exp2(-(n + 1));
    const double a = std::exp2(-n);
    // Carry the weight as the exact power of two: for n >= 53 the sum
    // 0.5 + 2^-(n+1) rounds to 0.5, so (sigma - 0.5) would collapse to zero
    // and silently null every deep stage.
    const double weight = 0.5 * a;
    std::complex<double> total{0.0, 0.0};
    double moment = 0.0;
    for (int k = 5 * (j - 1) + 1; k <= 5 * j; ++k) {
      if (k <= k0) {
        // Exact block: per-prime uniform rotations, weight ln p * p^{-sigma}.
        const primes::PrimeBlock& b = primes::block(k);
        util::KahanAcc re_acc, im_acc, m_acc;
        for (std::size_t i = 0; i < b.p.size(); ++i) {
          rng::Stream st(seed, rng::Dom::bp_euler, replica,
                         static_cast<std::uint64_t>(k), i);
          const double w = b.logp[i] * std::exp(-sigma * b.logp[i]);
          if (weights == field::WeightModel::gaussian) {
            const std::complex<double> g = st.complex_gaussian();
            re_acc.add(w * g.real());
            im_acc.add(w * g.imag());
          } else {
            const double phase = kTwoPi * st.uniform01();
            re_acc.add(w * std::cos(phase));
            im_acc.add(w * std::sin(phase));
          }
          m_acc.add(w * w);
        }
        total += std::complex<double>(re_acc.value(), im_acc.value());
        moment += m_acc.value();
      } else {
        const double var = surrogate_block_moment(k, a);
        rng::Stream st(seed, rng::Dom::bp_euler, replica,
                       static_cast<std::uint64_t>(k), 0xffffffffULL);
        total += std::sqrt(var) * st.complex_gaussian();
        moment += var;
      }
    }
    total *= weight;
    moment *= weight * weight;
    const double y = std::abs(total);
    const double z = (moment > 0.0) ? y / std::sqrt(moment) : 0.0;
    run_max = std::max(run_max, z);
    bs.stage.push_back(j);
    bs.scale_param.push_back(sigma);
    bs.y_re.push_back(total.real());
    bs.y_im.push_back(total.imag());
    bs.y_raw.push_back(y);
    bs.second_moment.push_back(moment);
    bs.y_norm.push_back(z);
    bs.running_max_norm.push_back(run_max);
  }
  return bs;
}

BlowupSeries bp_series_disc(int stages, std::uint64_t seed, std::uint64_t replica) {
  if (stages < 1 || stages > 40)
    throw std::domain_error("bp_series_disc: stages must be in 1..40");
  BlowupSeries bs;
  bs.model = Model::disc;
  bs.seed = seed;
  bs.replica = replica;
  const auto n = static_cast<std::size_t>(stages);

  // Correlation matrix of the joint complex Gaussian (G'(r_1),...,G'(r_J)):
  // R_kl = (1-r_k^2)(1-r_l^2) / (1 - r_k r_l)^2, computed with the exact
  // dyadic complements 2^{-k} to avoid cancellation near r = 1.
  std::vector<double> r(n), comp(n);
  for (std::size_t k = 0; k < n; ++k) {
    comp[k] = std::exp2(-static_cast<double>(k + 1));  // 1 - r_k
    r[k] = 1.0 - comp[k];
  }
  std::vector<double> corr(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      // 1 - r_i r_j = comp_i + comp_j - comp_i comp_j
      const double one_minus = comp[i] + comp[j] - comp[i] * comp[j];
      const double num = (comp[i] * (2.0 - comp[i])) * (comp[j] * (2.0 - comp[j]));
      corr[i * n + j] = corr[j * n + i] = num / (one_minus * one_minus);
    }
  const std::vector<double> chol = cholesky(corr, n);

  rng::Stream st(seed, rng::Dom::bp_disc, replica, 0x1addULL);
  std::vector<std::complex<double>> z(n);
  for (auto& v : z) v = st.complex_gaussian();

  double run_max = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> zeta{0.0, 0.0};
    for (std::size_t j = 0; j <= k; ++j) zeta += chol[k * n + j] * z[j];
    const double znorm = std::abs(zeta);        // E z^2 = 1 exactly
    const double y = znorm / (1.0 + r[k]);      // (1-r)|G'| = |zeta|/(1+r)
    run_max = std::max(run_max, znorm);
    bs.stage.push_back(static_cast<int>(k + 1));
    bs.scale_param.push_back(r[k]);
    const std::complex<double> g = zeta / (comp[k] * (2.0 - comp[k]));  // G'(r_k)
    bs.y_re.push_back(comp[k] * g.real());
    bs.y_im.push_back(comp[k] * g.imag());
    bs.y_raw.push_back(y);
    bs.second_moment.push_back(1.0 / ((1.0 + r[k]) * (1.0 + r[k])));
    bs.y_norm.push_back(znorm);
    bs.running_max_norm.push_back(run_max);
  }
  return bs;
}

std::vector<ExceedanceRow> detect_blowup(const std::vector<double>& running_max_finals,
                                         const std::vector<double>& thresholds) {
  if (running_max_finals.empty())
    throw std::invalid_argument("detect_blowup: no replicas");
  if (thresholds.empty())
    throw std::invalid_argument("detect_blowup: thresholds must be nonempty");
  std::vector<ExceedanceRow> rows;
  rows.reserve(thresholds.size());
  for (const double t : thresholds) {
    ExceedanceRow row;
    row.threshold = t;
    row.total = running_max_finals.size();
    for (const double v : running_max_finals)
      if (v > t) ++row.hits;
    row.fraction = static_cast<double>(row.hits) / static_cast<double>(row.total);
    const stats::Wilson w = stats::wilson95(row.hits, row.total);
    row.wilson_lo = w.lo;
    row.wilson_hi = w.hi;
    rows.push_back(row);
  }
  return rows;
}

const char* kBlowupReportNote =
    "note: almost-sure unboundedness along the boundary is an asymptotic "
    "statement; no finite set of scales can falsify it. The exceedance "
    "fractions below quantify growth at the sampled scales only.";

}  // namespace zc::inject
