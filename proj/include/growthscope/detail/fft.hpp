#pragma once

#include <cstddef>
#include <mutex>
#include <vector>

#include <fftw3.h>

namespace growthscope::detail {

// FFTW planning is not thread-safe; execution of a fresh plan is fine.
inline std::mutex& fftw_plan_mutex() {
  static std::mutex m;
  return m;
}

struct FftwBuffer {
  double* data = nullptr;
  explicit FftwBuffer(std::size_t n) { data = fftw_alloc_real(n); }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
};

struct FftwComplexBuffer {
  fftw_complex* data = nullptr;
  explicit FftwComplexBuffer(std::size_t n) { data = fftw_alloc_complex(n); }
  ~FftwComplexBuffer() { fftw_free(data); }
  FftwComplexBuffer(const FftwComplexBuffer&) = delete;
  FftwComplexBuffer& operator=(const FftwComplexBuffer&) = delete;
};

inline std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// Full linear convolution via zero-padded real FFTs:
// out[k] = sum_i a[i] * b[k - i],  k in [0, na + nb - 2].
inline std::vector<double> fft_convolve_full(const std::vector<double>& a,
                                             const std::vector<double>& b) {
  const std::size_t na = a.size(), nb = b.size();
  const std::size_t nfull = na + nb - 1;
  const std::size_t n = next_pow2(nfull);
  const std::size_t nc = n / 2 + 1;

  FftwBuffer ra(n), rb(n), rout(n);
  FftwComplexBuffer ca(nc), cb(nc);
  for (std::size_t i = 0; i < n; ++i) {
    ra.data[i] = i < na ? a[i] : 0.0;
    rb.data[i] = i < nb ? b[i] : 0.0;
  }
  fftw_plan pa, pb, pinv;
  {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex());
    pa = fftw_plan_dft_r2c_1d(static_cast<int>(n), ra.data, ca.data, FFTW_ESTIMATE);
    pb = fftw_plan_dft_r2c_1d(static_cast<int>(n), rb.data, cb.data, FFTW_ESTIMATE);
    pinv = fftw_plan_dft_c2r_1d(static_cast<int>(n), ca.data, rout.data, FFTW_ESTIMATE);
  }
  fftw_execute(pa);
  fftw_execute(pb);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < nc; ++i) {
    const double re = ca.data[i][0] * cb.data[i][0] - ca.data[i][1] * cb.data[i][1];
    const double im = ca.data[i][0] * cb.data[i][1] + ca.data[i][1] * cb.data[i][0];
    ca.data[i][0] = re * inv_n;
    ca.data[i][1] = im * inv_n;
  }
  fftw_execute(pinv);
  std::vector<double> out(nfull);
  for (std::size_t i = 0; i < nfull; ++i) out[i] = rout.data[i];
  {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex());
    fftw_destroy_plan(pa);
    fftw_destroy_plan(pb);
    fftw_destroy_plan(pinv);
  }
  return out;
}

}  // namespace growthscope::detail
