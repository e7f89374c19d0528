#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include "hgeo/kernels.hpp"

namespace hgeo::kernels::detail {

// Four points per iteration; the remainder goes through the scalar kernel.
__attribute__((target("avx2,fma"))) void residual_norms_avx2(
    const ResidualKernelData& data, const double* xs, std::size_t count, double* out) {
  const int n = data.dim;
  const std::size_t blocks = count / 4 * 4;
  __m256d x[kMaxDim];
  __m256d p[kMaxDim];
  for (std::size_t pt = 0; pt < blocks; pt += 4) {
    for (int a = 0; a < n; ++a) x[a] = _mm256_loadu_pd(xs + a * count + pt);

    __m256d s2 = _mm256_setzero_pd();
    for (int a = 0; a < n; ++a) {
      __m256d row = _mm256_setzero_pd();
      for (int b = 0; b < n; ++b)
        row = _mm256_fmadd_pd(_mm256_set1_pd(data.alpha[a * n + b]), x[b], row);
      s2 = _mm256_fmadd_pd(x[a], row, s2);
    }
    const __m256d s = _mm256_sqrt_pd(s2);
    for (int a = 0; a < n; ++a)
      p[a] = _mm256_fmadd_pd(s, _mm256_set1_pd(data.drift[a]), x[a]);

    __m256d acc = _mm256_setzero_pd();
    for (int i = 0; i < n; ++i) {
      const double* q = data.forms.data() + static_cast<std::size_t>(i) * n * n;
      __m256d r = _mm256_setzero_pd();
      for (int a = 0; a < n; ++a) {
        __m256d qx = _mm256_setzero_pd();
        for (int b = 0; b < n; ++b)
          qx = _mm256_fmadd_pd(_mm256_set1_pd(q[a * n + b]), x[b], qx);
        r = _mm256_fmadd_pd(p[a], qx, r);
      }
      acc = _mm256_fmadd_pd(r, r, acc);
    }
    _mm256_storeu_pd(out + pt, _mm256_sqrt_pd(acc));
  }
  residual_norms_scalar(data, xs, count, blocks, count, out);
}

}  // namespace hgeo::kernels::detail

#endif
