#pragma once
// Derivative blow-up diagnostics along scale ladders: the injectivity-style
// criterion that the normalized derivative statistics stay of unit order at
// every scale while their running maximum grows, for both the half-plane
// field and the disc field.
//
// Half-plane ladder: stage j uses sigma_j = 1/2 + 2^{-(n_j+1)} with
// n_j = 5j - 3 and the disjoint block window 5(j-1) < k <= 5j, so the stages
// are independent by construction (only stage 1 touches the exact blocks).
// The stage statistic is Y_j = (sigma_j - 1/2) * sum_p U_p ln p * p^{-sigma_j}
// over the window; its second moment tends to
// (1/4)[g2(8) - g2(1/4)] = 0.2426 (g2 the lower incomplete gamma at m = 2).
//
// Disc ladder: r_k = 1 - 2^{-k}; (G'(r_1), ..., G'(r_J)) is jointly complex
// Gaussian with E G'(r_k) conj G'(r_l) = (1 - r_k r_l)^{-2} and is sampled
// exactly through the Cholesky factor of its correlation matrix.
//
// Both carry raw values y = scale-adjusted |derivative| and normalized values
// z = |Y| / sqrt(E|Y|^2) (unit second moment); thresholds for exceedance
// tables are in these SD units.

#include <cstdint>
#include <string>
#include <vector>

#include "zc/eulerfield.hpp"

namespace zc::inject {

enum class Model { euler, disc };

struct BlowupSeries {
  Model model = Model::euler;
  std::uint64_t seed = 0;
  std::uint64_t replica = 0;
  std::vector<int> stage;            // 1-based ladder index
  std::vector<double> scale_param;   // sigma_j resp. r_k
  std::vector<double> y_re, y_im;    // the complex stage statistic
  std::vector<double> y_raw;         // |Y|
  std::vector<double> second_moment; // E|Y|^2 per stage (closed form / exact sums)
  std::vector<double> y_norm;        // |Y| / sqrt(E|Y|^2)
  std::vector<double> running_max_norm;
};

// `weights` switches the exact-block marks between uniform unit-circle
// rotations and complex standard Gaussians; both have unit second moment, so
// every second-moment statistic must agree between the two (CLT surrogacy).
BlowupSeries bp_series_euler(int stages, std::uint64_t seed, std::uint64_t replica,
                             int k0 = 4,
                             field::WeightModel weights = field::WeightModel::uniform_circle);
BlowupSeries bp_series_disc(int stages, std::uint64_t seed, std::uint64_t replica);

// Closed-form E|Y_j|^2 for a fully-surrogate euler stage (j >= 2).
double euler_stage_second_moment_surrogate(int j);

struct ExceedanceRow {
  double threshold = 0.0;
  std::size_t hits = 0;
  std::size_t total = 0;
  double fraction = 0.0;
  double wilson_lo = 0.0;
  double wilson_hi = 0.0;
};

// Exceedance table of per-replica terminal running maxima (normalized units)
// against the given thresholds.
std::vector<ExceedanceRow> detect_blowup(const std::vector<double>& running_max_finals,
                                         const std::vector<double>& thresholds);

// Caveat that must accompany every blow-up report: the almost-sure statement
// is asymptotic and cannot be falsified by finitely many scales.
extern const char* kBlowupReportNote;

}  // namespace zc::inject
