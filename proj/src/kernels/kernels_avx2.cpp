// AVX2+FMA variants of the dense kernels. Compiled with -mavx2 -mfma; only
// ever called after the runtime CPU check in dispatch.cpp passes.
#include "driveloop/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

namespace driveloop::kernels {
namespace {

inline double hsum256(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d shuf = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, shuf));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
  }
  double tail = 0.0;
  for (; i < n; ++i) tail += a[i] * b[i];
  return hsum256(acc) + tail;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_loadu_pd(y + i);
    vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void matvec_avx2(const double* w, const double* x, const double* b, double* y,
                 std::size_t m, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    y[i] = (b ? b[i] : 0.0) + dot_avx2(w + i * n, x, n);
  }
}

void matvec_t_avx2(const double* w, const double* dy, double* dx, std::size_t m,
                   std::size_t n) {
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) _mm256_storeu_pd(dx + j, _mm256_setzero_pd());
  for (; j < n; ++j) dx[j] = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    axpy_avx2(dy[i], w + i * n, dx, n);
  }
}

void outer_acc_avx2(double alpha, const double* u, const double* v, double* w,
                    std::size_t m, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    axpy_avx2(alpha * u[i], v, w + i * n, n);
  }
}

}  // namespace

const Ops kAvx2Ops = {dot_avx2, axpy_avx2, matvec_avx2, matvec_t_avx2,
                      outer_acc_avx2};

}  // namespace driveloop::kernels

#endif  // x86_64
