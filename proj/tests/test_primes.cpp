#include <cmath>
#include <cstdint>
#include <vector>

#include <doctest.h>

#include "zc/primes.hpp"
#include "zc/specfun.hpp"

using namespace zc::primes;

TEST_SUITE("primes") {

TEST_CASE("segmented sieve agrees with trial division") {
  const auto fast = sieve_upto(100000);
  const auto slow = trial_division_upto(100000);
  REQUIRE(fast.size() == slow.size());
  CHECK(fast == slow);
  CHECK(fast.size() == 9592);  // pi(1e5)
}

TEST_CASE("block boundaries follow the dyadic log ranges") {
  CHECK(block(0).p == std::vector<std::uint32_t>{2});
  CHECK(block(1).p == std::vector<std::uint32_t>{3, 5, 7});
  const auto& b2 = block(2);
  CHECK(b2.p.size() == 12);
  CHECK(b2.p.front() == 11);
  CHECK(b2.p.back() == 53);
  CHECK(block(4).p.size() == 594912);
  for (int k = 1; k <= kMaxBlock; ++k) {
    const auto& b = block(k);
    const double lo = std::ldexp(1.0, k - 1);
    const double hi = std::ldexp(1.0, k);
    REQUIRE(b.p.size() == b.logp.size());
    for (std::size_t i = 0; i < b.p.size(); ++i) {
      const double lp = std::log(static_cast<double>(b.p[i]));
      CHECK(lp > lo);
      CHECK(lp <= hi);
      CHECK(std::abs(b.logp[i] - lp) < 1e-15);
      if (i) CHECK(b.p[i] > b.p[i - 1]);
    }
  }
}

TEST_CASE("blocks partition the primes up to the cap") {
  std::vector<std::uint32_t> flat;
  for (int k = 0; k <= kMaxBlock; ++k)
    flat.insert(flat.end(), block(k).p.begin(), block(k).p.end());
  const auto direct = sieve_upto(static_cast<std::uint32_t>(block_upper_bound(4)));
  CHECK(flat == direct);
  CHECK(all_primes() == direct);
  CHECK(block_upper_bound(0) == 2);
  CHECK(block_upper_bound(1) == 7);
  CHECK(block_upper_bound(2) == 54);
}

TEST_CASE("capacity and domain guards") {
  CHECK_THROWS_AS(block(5), CapacityError);
  CHECK_THROWS_AS(block(-1), std::domain_error);
  try {
    block(7);
    FAIL("expected CapacityError");
  } catch (const CapacityError& e) {
    CHECK(e.requested_k == 7);
    CHECK(std::string(e.what()).find("cap") != std::string::npos);
  }
}

TEST_CASE("prime power sums: closed values, additivity, order stability") {
  double brute = 0.0;
  for (const double p : {3.0, 5.0, 7.0}) brute += std::pow(p, -1.5);
  CHECK(std::abs(prime_power_sum(0, 1, 0.75) - brute) < 1e-15);
  CHECK(std::abs(prime_power_sum(0, 1, 0.75) - 0.3358877335454707) < 1e-12);

  const double sigma = 0.62;
  const double whole = prime_power_sum(0, 4, sigma);
  const double split = prime_power_sum(0, 2, sigma) + prime_power_sum(2, 4, sigma);
  CHECK(std::abs(whole - split) < 1e-14 * whole);
}

TEST_CASE("power sum approaches the integral estimate as blocks deepen") {
  const double sigma = 0.5 + std::ldexp(1.0, -8);
  const double a = 2.0 * sigma - 1.0;
  double prev = -1.0;
  for (int k1 = 1; k1 <= 3; ++k1) {
    const int k2 = k1 + 1;
    const double exact = prime_power_sum(k1, k2, sigma);
    const double est = zc::specfun::expint_e1(a * std::ldexp(1.0, k1)) -
                       zc::specfun::expint_e1(a * std::ldexp(1.0, k2));
    const double resid = std::abs(exact - est);
    if (k1 > 1) CHECK(resid < prev);
    prev = resid;
  }
}

TEST_CASE("cosine-weighted sums: zero lag, evenness, damping") {
  const double sigma = 0.6;
  CHECK(prime_cos_sum(1, 2, sigma, 0.0) == prime_power_sum(1, 2, sigma));
  const double base = prime_power_sum(1, 2, sigma);
  double mean_abs = 0.0;
  for (const double d : {1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0}) {
    const double v = prime_cos_sum(1, 2, sigma, d);
    CHECK(std::abs(v - prime_cos_sum(1, 2, sigma, -d)) < 1e-16);
    CHECK(std::abs(v) <= base);
    mean_abs += std::abs(v) / 8.0;
  }
  CHECK(mean_abs < 0.5 * base);
}

TEST_CASE("cosine sums are continuous in the lag") {
  // Derivative bound sum ln(p) p^{-1.2} over block 2 is ~0.82 < 1, so steps of
  // 1e-3 can move the sum by less than 1e-3.
  const double sigma = 0.6;
  for (int i = 0; i < 200; ++i) {
    const double d = 2.0 * i / 200.0;
    const double jump =
        std::abs(prime_cos_sum(1, 2, sigma, d + 1e-3) - prime_cos_sum(1, 2, sigma, d));
    CHECK(jump < 1e-3);
  }
}

TEST_CASE("cosine sums match the quadrature surrogate at matching level") {
  // Half the exact sum vs the integral form. The twelve-prime block k = 2
  // carries the largest density error of any block, measured at 0.0561; the
  // bound leaves headroom without letting a sign error through.
  const double exact_half = 0.5 * prime_cos_sum(1, 2, 0.6, 0.1);
  const double integral = zc::specfun::surrogate_block_covariance(2, 0.6, 0.1);
  CHECK(std::abs(exact_half - integral) < 0.07);
}

TEST_CASE("log-weighted sums: reduction, growth bound, tail bound") {
  const double sigma = 0.6;
  const double a = prime_logweight_sum(1, 3, sigma, 0.0, 1.0);
  const double b = prime_power_sum(1, 3, sigma);
  CHECK(std::abs(a - b) < 1e-15 * b);

  // First-moment growth: sum (ln p)^2 p^{-2 sigma} over blocks up to k2 stays
  // near (1/2) 2^{2 k2} while k2 is well below the scale index.
  const double s8 = 0.5 + std::ldexp(1.0, -8);
  for (const int k2 : {2, 3}) {
    const double v = prime_logweight_sum(0, k2, s8, 2.0, 1.0);
    CHECK(v <= 0.5 * std::ldexp(1.0, 2 * k2) * 1.1);
    CHECK(v >= 0.25 * std::ldexp(1.0, 2 * k2));
  }

  // Heavy damping q > 1: bounded by (q-1)^{-m} Gamma(m) plus slack uniformly.
  CHECK(prime_logweight_sum(0, 4, 0.5, 2.0, 1.5) < 4.5);
}

TEST_CASE("block variance reports match the frozen calibration") {
  const double sigma = 0.5 + std::ldexp(1.0, -8);
  const double frozen_abs[] = {0.00834644, 0.09260422, 0.01439077, 0.00128215};
  for (int k = 1; k <= 4; ++k) {
    const auto r = verify_pnt_block(k, sigma);
    CHECK(r.k == k);
    CHECK(r.exact_sum > 0.0);
    CHECK(r.integral_estimate > 0.0);
    CHECK(std::abs(r.abs_err - std::abs(r.exact_sum - r.integral_estimate)) < 1e-18);
    CHECK(std::abs(r.abs_err - frozen_abs[k - 1]) < 1e-6);
    CHECK(std::abs(r.rel_err - r.abs_err / r.integral_estimate) < 1e-15);
  }
  // Per-block residuals shrink once blocks hold enough primes for the density
  // estimate to bite (block 2 has only 12 primes and is the known outlier).
  const double r2 = verify_pnt_block(2, sigma).abs_err;
  const double r3 = verify_pnt_block(3, sigma).abs_err;
  const double r4 = verify_pnt_block(4, sigma).abs_err;
  CHECK(r2 > r3);
  CHECK(r3 > r4);
  // Aggregated from block k1+1 to the cap the residual is monotone in k1.
  const double e1_16 = zc::specfun::expint_e1((2.0 * sigma - 1.0) * 16.0);
  double prev = 1e9;
  for (int k1 = 1; k1 <= 3; ++k1) {
    const double exact = 0.5 * prime_power_sum(k1, 4, sigma);
    const double est =
        0.5 * (zc::specfun::expint_e1((2.0 * sigma - 1.0) * std::ldexp(1.0, k1)) - e1_16);
    const double resid = std::abs(exact - est);
    CHECK(resid < prev);
    prev = resid;
  }
  // Deepest block: residual under 1 percent of the block variance.
  CHECK(r4 < 0.01 * verify_pnt_block(4, sigma).integral_estimate);
}

TEST_CASE("both sides of the block report vanish for large sigma") {
  const auto r = verify_pnt_block(2, 40.0);
  CHECK(r.exact_sum < 1e-60);
  CHECK(r.integral_estimate < 1e-60);
}

}  // TEST_SUITE
