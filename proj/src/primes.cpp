#include "zc/primes.hpp"

#include <cmath>
#include <mutex>

#include "zc/specfun.hpp"
#include "zc/util.hpp"

namespace zc::primes {
namespace {

std::uint64_t bound_for(int k) {
  // floor(exp(2^k)); exact integer values for the in-cap blocks.
  switch (k) {
    case 0: return 2;        // e^1  = 2.718...
    case 1: return 7;        // e^2  = 7.389...
    case 2: return 54;       // e^4  = 54.598...
    case 3: return 2980;     // e^8  = 2980.958...
    case 4: return 8886110;  // e^16 = 8886110.520...
    default: return 0;
  }
}

struct BlockCache {
  std::vector<PrimeBlock> blocks;  // index 0..kMaxBlock
  std::vector<std::uint32_t> flat;
};

const BlockCache& cache() {
  static const BlockCache c = [] {
    BlockCache bc;
    bc.flat = sieve_upto(static_cast<std::uint32_t>(bound_for(kMaxBlock)));
    bc.blocks.resize(kMaxBlock + 1);
    std::size_t i = 0;
    for (int k = 0; k <= kMaxBlock; ++k) {
      PrimeBlock& b = bc.blocks[k];
      b.k = k;
      const std::uint64_t hi = bound_for(k);
      while (i < bc.flat.size() && bc.flat[i] <= hi) {
        b.p.push_back(bc.flat[i]);
        b.logp.push_back(std::log(static_cast<double>(bc.flat[i])));
        ++i;
      }
    }
    return bc;
  }();
  return c;
}

}  // namespace

std::uint64_t block_upper_bound(int k) {
  if (k < 0) throw std::domain_error("block_upper_bound: k must be >= 0");
  if (k > kMaxBlock) throw CapacityError(k);
  return bound_for(k);
}

std::vector<std::uint32_t> sieve_upto(std::uint32_t limit) {
  std::vector<std::uint32_t> out;
  if (limit < 2) return out;
  out.push_back(2);
  if (limit < 3) return out;

  // Base odd primes up to sqrt(limit) by a plain odd-only sieve.
  const std::uint32_t root = static_cast<std::uint32_t>(std::sqrt(static_cast<double>(limit)));
  std::vector<bool> base_composite((root + 1) / 2, false);  // index i -> 2i+1
  std::vector<std::uint32_t> base;
  for (std::uint32_t i = 1; 2 * i + 1 <= root; ++i) {
    if (base_composite[i]) continue;
    const std::uint32_t p = 2 * i + 1;
    base.push_back(p);
    for (std::uint64_t j = static_cast<std::uint64_t>(p) * p; j <= root; j += 2 * p)
      base_composite[(j - 1) / 2] = true;
  }

  // Segmented sweep over odd numbers in [3, limit].
  constexpr std::uint32_t kSegment = 1u << 17;  // odd values per segment
  std::vector<bool> seg(kSegment);
  for (std::uint64_t lo = 3; lo <= limit; lo += 2ull * kSegment) {
    const std::uint64_t hi = std::min<std::uint64_t>(lo + 2ull * kSegment - 2, limit);
    std::fill(seg.begin(), seg.end(), false);
    for (const std::uint32_t p : base) {
      std::uint64_t start = static_cast<std::uint64_t>(p) * p;
      if (start < lo) {
        const std::uint64_t m = (lo + p - 1) / p;
        start = (m | 1ull) * p;  // first odd multiple of p at or past lo
      }
      for (std::uint64_t j = start; j <= hi; j += 2ull * p) seg[(j - lo) / 2] = true;
    }
    for (std::uint64_t v = lo; v <= hi; v += 2)
      if (!seg[(v - lo) / 2]) out.push_back(static_cast<std::uint32_t>(v));
  }
  return out;
}

std::vector<std::uint32_t> trial_division_upto(std::uint32_t limit) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t n = 2; n <= limit; ++n) {
    bool prime = n >= 2;
    for (std::uint32_t d = 2; static_cast<std::uint64_t>(d) * d <= n; ++d)
      if (n % d == 0) {
        prime = false;
        break;
      }
    if (prime) out.push_back(n);
  }
  return out;
}

const PrimeBlock& block(int k) {
  if (k < 0) throw std::domain_error("block: k must be >= 0");
  if (k > kMaxBlock) throw CapacityError(k);
  return cache().blocks[k];
}

const std::vector<std::uint32_t>& all_primes() { return cache().flat; }

namespace {

void check_range(int k1, int k2) {
  if (k1 < 0 || k2 <= k1) throw std::domain_error("block range requires 0 <= k1 < k2");
  if (k2 > kMaxBlock) throw CapacityError(k2);
}

}  // namespace

double prime_power_sum(int k1, int k2, double sigma) {
  check_range(k1, k2);
  util::KahanAcc acc;
  for (int k = k1 + 1; k <= k2; ++k) {
    const PrimeBlock& b = block(k);
    for (const double lp : b.logp) acc.add(std::exp(-2.0 * sigma * lp));
  }
  return acc.value();
}

double prime_cos_sum(int k1, int k2, double sigma, double delta) {
  check_range(k1, k2);
  delta = std::abs(delta);
  util::KahanAcc acc;
  for (int k = k1 + 1; k <= k2; ++k) {
    const PrimeBlock& b = block(k);
    for (const double lp : b.logp)
      acc.add(std::cos(delta * lp) * std::exp(-2.0 * sigma * lp));
  }
  return acc.value();
}

double prime_logweight_sum(int k1, int k2, double sigma, double m, double q) {
  check_range(k1, k2);
  if (m < 0.0) throw std::domain_error("prime_logweight_sum: m must be >= 0");
  if (!(q > 0.0)) throw std::domain_error("prime_logweight_sum: q must be > 0");
  util::KahanAcc acc;
  for (int k = k1 + 1; k <= k2; ++k) {
    const PrimeBlock& b = block(k);
    for (const double lp : b.logp) {
      double w;
      if (m == 0.0)
        w = 1.0;
      else if (m == 1.0)
        w = lp;
      else if (m == 2.0)
        w = lp * lp;
      else
        w = std::pow(lp, m);
      acc.add(w * std::exp(-2.0 * q * sigma * lp));
    }
  }
  return acc.value();
}

PntReport verify_pnt_block(int k, double sigma) {
  if (k < 1) throw std::domain_error("verify_pnt_block: k must be >= 1");
  PntReport r;
  r.k = k;
  r.sigma = sigma;
  // Block variance level: exact is the per-prime sum of E[Re(U p^{-ih})/p^s]^2
  // = (1/2) sum p^{-2s}, the estimate its integral surrogate v_k^2.
  r.exact_sum = 0.5 * prime_power_sum(k - 1, k, sigma);
  r.integral_estimate = specfun::block_variance_v2(k, sigma);
  r.abs_err = std::abs(r.exact_sum - r.integral_estimate);
  r.rel_err = r.abs_err / std::abs(r.integral_estimate);
  return r;
}

}  // namespace zc::primes
