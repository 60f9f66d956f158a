#include "zc/fftutil.hpp"

#include <fftw3.h>

#include <cstring>
#include <mutex>
#include <stdexcept>

namespace zc::fft {
namespace {

std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

void c2c_backward(std::vector<std::complex<double>>& data) {
  const std::size_t n = data.size();
  if (n == 0) return;
  fftw_complex* buf = fftw_alloc_complex(n);
  if (!buf) throw std::bad_alloc();
  std::memcpy(buf, data.data(), n * sizeof(fftw_complex));
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(plan_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(plan_mutex());
    fftw_destroy_plan(plan);
  }
  std::memcpy(static_cast<void*>(data.data()), buf, n * sizeof(fftw_complex));
  fftw_free(buf);
}

std::vector<double> c2r_backward(const std::vector<std::complex<double>>& half,
                                 std::size_t m_out) {
  if (half.size() != m_out / 2 + 1)
    throw std::invalid_argument("c2r_backward: half spectrum must have M/2+1 bins");
  fftw_complex* in = fftw_alloc_complex(half.size());
  double* out = fftw_alloc_real(m_out);
  if (!in || !out) throw std::bad_alloc();
  std::memcpy(in, half.data(), half.size() * sizeof(fftw_complex));
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(plan_mutex());
    plan = fftw_plan_dft_c2r_1d(static_cast<int>(m_out), in, out, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(plan_mutex());
    fftw_destroy_plan(plan);
  }
  std::vector<double> result(out, out + m_out);
  fftw_free(in);
  fftw_free(out);
  return result;
}

}  // namespace zc::fft
