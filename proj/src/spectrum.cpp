#include "zc/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "zc/discchaos.hpp"
#include "zc/rng.hpp"
#include "zc/specfun.hpp"
#include "zc/stats.hpp"
#include "zc/util.hpp"
#include "zc/workers.hpp"

namespace zc::spectrum {
namespace {

constexpr double kLn2 = 0.69314718055994530941723212145818;
constexpr double kTwoPi = 6.283185307179586476925286766559;

std::size_t pow2_at_least(std::size_t v) {
  std::size_t n = 2;
  while (n < v) n <<= 1;
  return n;
}

struct ScalePlan {
  int n = 0;
  double abscissa = 0.0;
  double param = 0.0;     // sigma (euler) or r (disc) or N (rem)
  std::size_t grid = 0;   // 0 for rem
  bool periodic = false;
};

ScalePlan plan_scale(Model model, int n, const SpectrumOptions& opts,
                     std::vector<std::string>* warnings) {
  ScalePlan p;
  p.n = n;
  switch (model) {
    case Model::euler: {
      if (n < 1) throw EstimationError("euler scale index must be >= 1");
      p.param = 0.5 + std::exp2(-(n + 1));
      p.abscissa = (n + 1) * kLn2;
      p.grid = opts.grid_override ? opts.grid_override
                                  : (static_cast<std::size_t>(1) << (n + 2));
      p.periodic = false;
      break;
    }
    case Model::disc: {
      if (n < 1) throw EstimationError("disc scale index must be >= 1");
      p.param = 1.0 - std::exp(-static_cast<double>(n));
      p.abscissa = static_cast<double>(n);
      const auto nm = static_cast<std::size_t>(disc::modes_for(p.param, opts.mode_tol));
      p.grid = opts.grid_override
                   ? opts.grid_override
                   : std::max(pow2_at_least(2 * (nm + 1)),
                              static_cast<std::size_t>(1) << (n + 2));
      p.periodic = true;
      break;
    }
    case Model::rem: {
      if (n < 1 || n > 30) throw EstimationError("rem scale index must be in 1..30");
      p.param = std::exp2(n);
      p.abscissa = n * kLn2;
      p.grid = 0;
      break;
    }
  }
  if (model != Model::rem && warnings) {
    const std::size_t resolved = static_cast<std::size_t>(1) << (n + 2);
    if (p.grid < resolved)
      warnings->push_back("resolution: scale " + std::to_string(n) + " sampled on " +
                          std::to_string(p.grid) + " points, below the resolved 2^(n+2) = " +
                          std::to_string(resolved) +
                          "; integral means may be biased");
  }
  return p;
}

// Replica identifiers disjoint across scales so scales are independent.
std::uint64_t scale_replica_id(std::size_t scale_idx, int rep) {
  return (static_cast<std::uint64_t>(scale_idx) << 40) +
         static_cast<std::uint64_t>(rep);
}

}  // namespace

double theoretical_f(std::complex<double> beta) {
  const double b = std::abs(beta);
  if (b <= 2.0) return 0.25 * b * b;
  return b - 1.0;
}

double complex_beta_reduce(std::complex<double> beta) { return std::abs(beta); }

double log_integral(const std::vector<double>& values, double beta, bool periodic) {
  if (values.size() < 2) throw std::invalid_argument("log_integral: need >= 2 points");
  const double domain = periodic ? kTwoPi : 1.0;
  double peak = beta * values[0];
  for (const double v : values) peak = std::max(peak, beta * v);
  util::KahanAcc num, den;
  const std::size_t m = values.size();
  for (std::size_t j = 0; j < m; ++j) {
    const double w = (!periodic && (j == 0 || j == m - 1)) ? 0.5 : 1.0;
    num.add(w * std::exp(beta * values[j] - peak));
    den.add(w);
  }
  return peak + std::log(num.value()) - std::log(den.value()) + std::log(domain);
}

double free_energy(double log_integral_value, double normalizer) {
  if (!(normalizer > 0.0)) throw std::invalid_argument("free_energy: normalizer must be > 0");
  return log_integral_value / normalizer;
}

SpectrumEstimate estimate_spectrum(Model model, std::complex<double> beta,
                                   const std::vector<int>& scales, int replicas,
                                   std::uint64_t seed, const SpectrumOptions& opts) {
  if (scales.size() < 3)
    throw EstimationError("spectrum estimation needs at least 3 scales (got " +
                          std::to_string(scales.size()) + ")");
  if (replicas < 10)
    throw EstimationError("spectrum estimation needs at least 10 replicas (got " +
                          std::to_string(replicas) + ")");

  SpectrumEstimate est;
  est.model = model;
  est.beta = beta;
  est.beta_reduced = complex_beta_reduce(beta);
  est.scales = scales;
  est.replicas = replicas;

  std::vector<ScalePlan> plans;
  plans.reserve(scales.size());
  for (const int n : scales) plans.push_back(plan_scale(model, n, opts, &est.warnings));

  const double b = est.beta_reduced;
  est.log_integrals.assign(scales.size(),
                           std::vector<double>(static_cast<std::size_t>(replicas), 0.0));

  const std::size_t total = scales.size() * static_cast<std::size_t>(replicas);
  workers::run_indexed(total, opts.workers, [&](std::size_t task) {
    const std::size_t si = task / static_cast<std::size_t>(replicas);
    const int rep = static_cast<int>(task % static_cast<std::size_t>(replicas));
    const ScalePlan& p = plans[si];
    const std::uint64_t rid = scale_replica_id(si, rep);
    double y = 0.0;
    switch (model) {
      case Model::euler: {
        const field::FieldSample fs =
            field::sample_field(p.param, p.grid, seed, rid, opts.k0, -1,
                                opts.tail_blocks, opts.weights);
        y = log_integral(fs.values, b, false);
        break;
      }
      case Model::disc: {
        const disc::CircleFieldSample cs =
            disc::sample_disc_field(p.param, p.grid, seed, rid, opts.mode_tol);
        y = log_integral(cs.values, b, true);
        break;
      }
      case Model::rem: {
        y = rem_log_partition(static_cast<std::uint64_t>(p.param), b, seed, rid);
        break;
      }
    }
    est.log_integrals[si][static_cast<std::size_t>(rep)] = y;
  });

  est.abscissa.reserve(plans.size());
  est.mean_log_integral.reserve(plans.size());
  for (std::size_t si = 0; si < plans.size(); ++si) {
    est.abscissa.push_back(plans[si].abscissa);
    est.mean_log_integral.push_back(stats::mean_se(est.log_integrals[si]).mean);
  }
  const stats::OlsFit fit = stats::ols(est.abscissa, est.mean_log_integral);
  est.slope = fit.slope;
  est.intercept = fit.intercept;

  // Bootstrap over replicas within each scale, percentile 95% interval.
  const int b_count = std::max(200, opts.bootstrap);
  std::vector<double> slopes(static_cast<std::size_t>(b_count));
  std::vector<double> ys(plans.size());
  for (int bi = 0; bi < b_count; ++bi) {
    for (std::size_t si = 0; si < plans.size(); ++si) {
      rng::Stream st(seed, rng::Dom::bootstrap, si, static_cast<std::uint64_t>(bi));
      util::KahanAcc acc;
      for (int rr = 0; rr < replicas; ++rr) {
        const auto pick = static_cast<std::size_t>(st.uniform01() * replicas);
        acc.add(est.log_integrals[si][std::min(pick, est.log_integrals[si].size() - 1)]);
      }
      ys[si] = acc.value() / static_cast<double>(replicas);
    }
    slopes[static_cast<std::size_t>(bi)] = stats::ols(est.abscissa, ys).slope;
  }
  std::sort(slopes.begin(), slopes.end());
  est.ci_halfwidth = 0.5 * (stats::percentile_sorted(slopes, 0.975) -
                            stats::percentile_sorted(slopes, 0.025));
  return est;
}

double thick_point_measure(const std::vector<double>& values, double gamma,
                           double normalizer, bool periodic) {
  if (values.empty()) throw std::invalid_argument("thick_point_measure: empty sample");
  const double domain = periodic ? kTwoPi : 1.0;
  // Level zero: the limsup-normalized thick set is the whole space.
  if (gamma == 0.0) return domain;
  const double threshold = gamma * normalizer;
  std::size_t count = 0;
  for (const double v : values)
    if (v >= threshold) ++count;
  return domain * static_cast<double>(count) / static_cast<double>(values.size());
}

ThickEstimate thick_point_spectrum(Model model, double gamma,
                                   const std::vector<int>& scales, int replicas,
                                   std::uint64_t seed, const SpectrumOptions& opts) {
  if (model == Model::rem)
    throw EstimationError("thick points are defined for the field models only");
  if (scales.empty()) throw EstimationError("thick_point_spectrum: need >= 1 scale");
  if (replicas < 1) throw EstimationError("thick_point_spectrum: need >= 1 replica");

  ThickEstimate est;
  est.model = model;
  est.gamma = gamma;
  est.scales = scales;
  est.replicas = replicas;

  std::vector<ScalePlan> plans;
  for (const int n : scales) plans.push_back(plan_scale(model, n, opts, nullptr));

  std::vector<std::vector<double>> measures(
      plans.size(), std::vector<double>(static_cast<std::size_t>(replicas), 0.0));
  const std::size_t total = plans.size() * static_cast<std::size_t>(replicas);
  workers::run_indexed(total, opts.workers, [&](std::size_t task) {
    const std::size_t si = task / static_cast<std::size_t>(replicas);
    const int rep = static_cast<int>(task % static_cast<std::size_t>(replicas));
    const ScalePlan& p = plans[si];
    const std::uint64_t rid = scale_replica_id(si, rep);
    double mu = 0.0;
    if (model == Model::euler) {
      const field::FieldSample fs = field::sample_field(
          p.param, p.grid, seed, rid, opts.k0, -1, opts.tail_blocks, opts.weights);
      mu = thick_point_measure(fs.values, gamma, p.abscissa, false);
    } else {
      const disc::CircleFieldSample cs =
          disc::sample_disc_field(p.param, p.grid, seed, rid, opts.mode_tol);
      mu = thick_point_measure(cs.values, gamma, p.abscissa, true);
    }
    measures[si][static_cast<std::size_t>(rep)] = mu;
  });

  std::vector<double> xs, ys;
  for (std::size_t si = 0; si < plans.size(); ++si) {
    const stats::MeanSe ms = stats::mean_se(measures[si]);
    est.mean_measure.push_back(ms.mean);
    std::size_t hits = 0;
    for (const double v : measures[si])
      if (v > 0.0) ++hits;
    est.replica_hit_rate.push_back(static_cast<double>(hits) /
                                   static_cast<double>(replicas));
    if (ms.mean > 0.0) {
      xs.push_back(plans[si].abscissa);
      ys.push_back(std::log(ms.mean));
    } else {
      est.degenerate = true;
    }
  }
  if (xs.size() >= 2) {
    est.slope = stats::ols(xs, ys).slope;
  } else {
    est.degenerate = true;
    est.slope = 0.0;
  }
  return est;
}

double rem_log_partition(std::uint64_t n_energies, double beta, std::uint64_t seed,
                         std::uint64_t replica) {
  if (n_energies < 2) throw std::invalid_argument("rem_log_partition: need N >= 2");
  const double ln_n = std::log(static_cast<double>(n_energies));
  const double sd = std::sqrt(0.5 * ln_n);
  rng::Stream st(seed, rng::Dom::rem, replica);
  // Streaming log-sum-exp.
  double peak = -std::numeric_limits<double>::infinity();
  double acc = 0.0;
  for (std::uint64_t i = 0; i < n_energies; ++i) {
    const double v = beta * sd * st.normal();
    if (v <= peak) {
      acc += std::exp(v - peak);
    } else {
      acc = acc * std::exp(peak - v) + 1.0;
      peak = v;
    }
  }
  return peak + std::log(acc) - ln_n;
}

double rem_free_energy(std::uint64_t n_energies, double beta, std::uint64_t seed,
                       std::uint64_t replica) {
  return rem_log_partition(n_energies, beta, seed, replica) /
         std::log(static_cast<double>(n_energies));
}

}  // namespace zc::spectrum
