#pragma once
// Thin deterministic wrappers over FFTW (plan creation is serialized; FFTW
// plans are not thread-safe to create, while executing on distinct buffers is
// fine). All transforms are unnormalized FFTW conventions.

#include <complex>
#include <cstddef>
#include <vector>

namespace zc::fft {

// In-place backward transform: data_j <- sum_m data_m * exp(+2*pi*i*j*m/N).
void c2c_backward(std::vector<std::complex<double>>& data);

// Hermitian half-spectrum (size M/2+1) to M real samples:
//   x_j = c_0 + 2 * sum_{m=1}^{M/2-1} Re(c_m exp(2*pi*i*j*m/M)) + Re(c_{M/2}) (-1)^j.
std::vector<double> c2r_backward(const std::vector<std::complex<double>>& half,
                                 std::size_t m_out);

}  // namespace zc::fft
