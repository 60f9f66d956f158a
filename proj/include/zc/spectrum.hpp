#pragma once
// Integral means, free energies and spectrum (slope) estimation for the three
// models: the half-plane Euler field, the disc chaos, and the REM benchmark.
//
// The estimated quantity is the growth exponent of \int exp(beta X) against
// the scale normalizer: abscissa (n+1) ln 2 for the Euler field at
// sigma_n = 1/2 + 2^{-(n+1)}, n for the disc at r_n = 1 - e^{-n}, and ln N for
// the REM with N energies. The predicted curve is beta^2/4 below the critical
// |beta| = 2 and |beta| - 1 above.

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "zc/eulerfield.hpp"

namespace zc::spectrum {

struct EstimationError : std::invalid_argument {
  explicit EstimationError(const std::string& what) : std::invalid_argument(what) {}
};

// Predicted spectrum: |beta|^2/4 for |beta| <= 2, |beta| - 1 above. Depends on
// beta only through its modulus.
double theoretical_f(std::complex<double> beta);

// The modulus reduction used for complex inverse temperatures:
// |exp(beta G)| = exp(Re(beta G)) has the same law as exp(|beta| U), so every
// estimator consumes reduce(beta) = |beta|.
double complex_beta_reduce(std::complex<double> beta);

// log \int_D exp(beta X) over the sampled domain. Periodic grids (the circle,
// domain length 2 pi) weight points uniformly; the h-grid on [0,1] uses
// trapezoid endpoint weights. At beta = 0 the result is exactly the log of
// the domain length. Computed by log-sum-exp, immune to overflow for any
// beta * X in double range.
double log_integral(const std::vector<double>& values, double beta, bool periodic);

// Free energy: log integral divided by the scale normalizer.
double free_energy(double log_integral_value, double normalizer);

enum class Model { euler, disc, rem };

struct SpectrumOptions {
  int k0 = 4;             // exact-block depth for the euler model
  int tail_blocks = 3;    // euler blocks beyond n(sigma)
  double mode_tol = 1e-8; // disc truncation
  std::size_t grid_override = 0;  // 0 = automatic resolution per scale
  int workers = 1;
  int bootstrap = 200;
  field::WeightModel weights = field::WeightModel::uniform_circle;
};

struct SpectrumEstimate {
  Model model = Model::disc;
  std::complex<double> beta{0.0, 0.0};
  double beta_reduced = 0.0;
  std::vector<int> scales;
  std::vector<double> abscissa;              // normalizer per scale
  std::vector<double> mean_log_integral;     // replica average per scale
  std::vector<std::vector<double>> log_integrals;  // [scale][replica]
  double slope = 0.0;                        // estimated f(beta)
  double intercept = 0.0;
  double ci_halfwidth = 0.0;                 // bootstrap 95% half-width
  int replicas = 0;
  std::vector<std::string> warnings;
};

// Scale indices are the integers n described above. Requires >= 3 scales and
// >= 10 replicas (EstimationError otherwise). Deterministic in (seed, config),
// independent of worker count and replica ordering.
SpectrumEstimate estimate_spectrum(Model model, std::complex<double> beta,
                                   const std::vector<int>& scales, int replicas,
                                   std::uint64_t seed,
                                   const SpectrumOptions& opts = {});

// Thick-point measure of one sampled field: the measure of grid points with
// X >= gamma * normalizer (times the domain length). By the limsup convention
// the level-zero thick set is the whole domain, exactly.
double thick_point_measure(const std::vector<double>& values, double gamma,
                           double normalizer, bool periodic);

struct ThickEstimate {
  Model model = Model::disc;
  double gamma = 0.0;
  std::vector<int> scales;
  std::vector<double> mean_measure;      // replica-averaged measure per scale
  std::vector<double> replica_hit_rate;  // fraction of replicas with measure > 0
  double slope = 0.0;    // d log(measure) / d log(scale); -gamma^2 predicted
  bool degenerate = false;  // some scale had zero measure in every replica
  int replicas = 0;
};

ThickEstimate thick_point_spectrum(Model model, double gamma,
                                   const std::vector<int>& scales, int replicas,
                                   std::uint64_t seed,
                                   const SpectrumOptions& opts = {});

// One REM draw: y = log( N^{-1} sum_{i<N} exp(beta H_i) ), H iid centered
// normal with variance (ln N)/2, streamed so N up to 2^26 stays in O(1) memory.
double rem_log_partition(std::uint64_t n_energies, double beta, std::uint64_t seed,
                         std::uint64_t replica);

// rem_log_partition / ln N, the REM free energy draw.
double rem_free_energy(std::uint64_t n_energies, double beta, std::uint64_t seed,
                       std::uint64_t replica);

}  // namespace zc::spectrum
