#pragma once
// Randomized Euler-product field on the critical strip.
//
// The field at height h with depth parameter sigma in (1/2, 1] is
//   X_h = sum_p Re(U_p p^{-i h}) / p^sigma,
// with independent uniform rotations U_p (or standard complex Gaussian marks).
// Primes are organized in dyadic frequency blocks 2^{k-1} < ln p <= 2^k.
// Blocks up to k0 <= 4 are sampled exactly from the primes; deeper blocks use
// a Gaussian surrogate whose spectral measure on [2^{k-1}, 2^k] has density
// e^{-(2 sigma - 1) u} / (2u), the prime-density limit of the block sums.
//
// Surrogate synthesis assigns mode masses from that density in closed E1 form
// (panel mass = 1/2 [E1(a u_lo) - E1(a u_hi)]); the masses telescope to the
// exact block variance and are nonnegative by monotonicity of E1, so the
// construction never manufactures negative spectrum. Masses that round below
// zero are clipped at -clip_tol; anything worse raises EmbeddingError.

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "zc/primes.hpp"

namespace zc::field {

enum class WeightModel { uniform_circle, gaussian };
enum class BlockOrigin { exact, surrogate };

struct EmbeddingError : std::runtime_error {
  double min_mass;
  EmbeddingError(int k, double sigma, double min_mass_in)
      : std::runtime_error("surrogate spectrum for block " + std::to_string(k) +
                           " at sigma = " + std::to_string(sigma) +
                           " produced a negative mode mass " +
                           std::to_string(min_mass_in)),
        min_mass(min_mass_in) {}
};

// Evaluation grid: m >= 2 equispaced points j/(m-1) covering [0, 1].
std::vector<double> h_grid(std::size_t m);

struct BlockFieldSample {
  int k = 0;
  BlockOrigin origin = BlockOrigin::exact;
  std::vector<double> values;
};

// Exact block sample (k <= 4): per-prime draws on substreams keyed by
// (seed, replica, k, prime index), so the result is independent of worker
// scheduling and of which other blocks are sampled.
BlockFieldSample sample_exact_block(int k, double sigma, std::size_t m,
                                    std::uint64_t seed, std::uint64_t replica,
                                    WeightModel weights = WeightModel::uniform_circle);

// Surrogate Gaussian block sample for k >= 1 (normally used for k > k0).
BlockFieldSample sample_surrogate_block(int k, double sigma, std::size_t m,
                                        std::uint64_t seed, std::uint64_t replica,
                                        double clip_tol = 1e-8);

struct FieldSample {
  double sigma = 0.0;
  int n = 0;      // dyadic scale index of sigma
  int k0 = 0;     // deepest exact block
  int k_top = 0;  // deepest block included at all
  std::uint64_t seed = 0;
  std::uint64_t replica = 0;
  WeightModel weights = WeightModel::uniform_circle;
  std::vector<double> values;
};

// Full field: block 0 ({2}) is always exact, blocks 1..k0 exact, blocks
// k0+1..k_top surrogate (all surrogate modes share one synthesis pass).
// k_top < 0 selects n(sigma) + tail_blocks.
FieldSample sample_field(double sigma, std::size_t m, std::uint64_t seed,
                         std::uint64_t replica, int k0 = primes::kMaxBlock,
                         int k_top = -1, int tail_blocks = 3,
                         WeightModel weights = WeightModel::uniform_circle);

// Modified Bessel I0 power series, for the single-prime Laplace transform
// E exp(lambda * Re(U p^{-ih}) / p^sigma) = I0(lambda / p^sigma).
double bessel_i0_series(double x);

struct LaplaceReport {
  std::uint64_t p = 0;
  double sigma = 0.0;
  double lambda = 0.0;
  double mc_mean = 0.0;
  double mc_se = 0.0;
  double series_value = 0.0;
  double z_score = 0.0;
};
LaplaceReport laplace_check(std::uint64_t p, double sigma, double lambda,
                            int replicas, std::uint64_t seed);

// Pointwise covariance of the field between two strip points s = sigma + i t,
// s2 = sigma' + i t' with sigma + sigma' > 1: exact prime sum up to exp(16)
// plus the integral tail of the prime-density surrogate.
double halfplane_covariance(std::complex<double> s1, std::complex<double> s2);

}  // namespace zc::field
