#pragma once
// Prime enumeration and exact dyadic-block prime sums.
//
// Block k >= 1 holds the primes with exp(2^{k-1}) < p <= exp(2^k); block 0 is
// the single prime {2} (p <= e), so the union over blocks 0..k covers every
// prime up to exp(2^k). Blocks are capped at k = 4 (p <= exp(16), about 8.9e6):
// one more block would square the bound to ~7.9e13, far past enumerability
// here, which is exactly why the sampler switches to surrogates above the cap.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace zc::primes {

inline constexpr int kMaxBlock = 4;

struct CapacityError : std::runtime_error {
  int requested_k;
  explicit CapacityError(int k)
      : std::runtime_error("prime block " + std::to_string(k) +
                           " exceeds the enumerable cap k = " +
                           std::to_string(kMaxBlock) +
                           " (bound exp(2^k) grows doubly exponentially)"),
        requested_k(k) {}
};

// Largest prime bound covered by block k: floor(exp(2^k)).
std::uint64_t block_upper_bound(int k);

// Segmented sieve of Eratosthenes; all primes <= limit in increasing order.
std::vector<std::uint32_t> sieve_upto(std::uint32_t limit);

// Reference for tests: trial-division primes <= limit.
std::vector<std::uint32_t> trial_division_upto(std::uint32_t limit);

struct PrimeBlock {
  int k = 0;
  std::vector<std::uint32_t> p;
  std::vector<double> logp;  // cached ln p, same order
};

// Cached block access (thread-safe, built on first use). Throws CapacityError
// for k > kMaxBlock, std::domain_error for k < 0.
const PrimeBlock& block(int k);

// All primes <= exp(2^kMaxBlock), increasing (blocks 0..kMaxBlock flattened).
const std::vector<std::uint32_t>& all_primes();

// Exact sum of p^{-2 sigma} over blocks k1+1 .. k2 (i.e. exp(2^{k1}) < p <=
// exp(2^{k2})), Kahan-compensated, ascending-prime order. 0 <= k1 < k2 <= cap.
double prime_power_sum(int k1, int k2, double sigma);

// Same range, sum of cos(delta * ln p) * p^{-2 sigma}. Even in delta; at
// delta = 0 it reproduces prime_power_sum bit for bit.
double prime_cos_sum(int k1, int k2, double sigma, double delta);

// Same range, sum of (ln p)^m * p^{-2 q sigma}; m >= 0, q > 0.
double prime_logweight_sum(int k1, int k2, double sigma, double m, double q);

// Compare the exact block-k variance (1/2) sum p^{-2 sigma} against its
// integral surrogate v_k^2 = (1/2) \int_{2^{k-1}}^{2^k} e^{-(2 sigma - 1) u}/u du
// (density-of-primes heuristic).
struct PntReport {
  int k = 0;
  double sigma = 0.0;
  double exact_sum = 0.0;
  double integral_estimate = 0.0;
  double abs_err = 0.0;
  double rel_err = 0.0;
};
PntReport verify_pnt_block(int k, double sigma);

}  // namespace zc::primes
