#pragma once
// Deterministic, splittable random streams.
//
// Substreams are derived from (master seed, domain tag, up to three indices)
// through a splitmix64 hash chain and drive independent xoshiro256++ states.
// Gaussians come from Box-Muller with a cached second value so the number of
// raw draws consumed per call is fixed; this keeps every substream bit-stable
// regardless of worker count or call interleaving.

#include <cstdint>
#include <cmath>
#include <complex>

namespace zc::rng {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

inline std::uint64_t splitmix64_next(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// One avalanching chain step: the full hash output becomes the next state, so
// every key injected between steps is diffused across all 64 bits. Tuples that
// differ in two slots then cannot cancel each other the way they could if the
// state only advanced by a constant between injections.
inline std::uint64_t chain_mix(std::uint64_t v) {
  std::uint64_t x = v;
  return splitmix64_next(x);
}

// Domain tags keep streams drawn for different purposes disjoint even when
// their numeric indices coincide.
enum class Dom : std::uint64_t {
  theta = 0x7a01,       // per-prime rotations / Gaussian marks
  surrogate = 0x7a02,   // surrogate block mode amplitudes
  disc_modes = 0x7a03,  // disc Fourier mode amplitudes
  rem = 0x7a04,         // REM energies
  bootstrap = 0x7a05,   // bootstrap resampling
  bp_euler = 0x7a06,    // blow-up series, half-plane model
  bp_disc = 0x7a07,     // blow-up series, disc model
  laplace = 0x7a08      // single-prime Laplace transform replicas
};

class Stream {
 public:
  Stream(std::uint64_t master, Dom dom, std::uint64_t a = 0, std::uint64_t b = 0,
         std::uint64_t c = 0) {
    std::uint64_t x = master ^ 0x243f6a8885a308d3ULL;  // avoid the all-zero fixed point for seed 0
    x = chain_mix(x ^ static_cast<std::uint64_t>(dom));
    x = chain_mix(x ^ a);
    x = chain_mix(x ^ b);
    x = chain_mix(x ^ c);
    for (auto& w : s_) w = splitmix64_next(x);
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform on (0,1]; never returns 0 so log() is always finite.
  double uniform_pos() { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }

  // Uniform on [0,1).
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform_pos();
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = kTwoPi * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

  // Complex Gaussian with E|Z|^2 = 1 (real and imaginary parts N(0, 1/2)).
  std::complex<double> complex_gaussian() {
    constexpr double half_sqrt2 = 0.70710678118654752440;
    const double re = normal() * half_sqrt2;
    const double im = normal() * half_sqrt2;
    return {re, im};
  }

 private:
  static std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }
  std::uint64_t s_[4];
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace zc::rng
