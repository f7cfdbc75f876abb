// Compiled with -mavx2 -mfma. Only raw loops live here: no std templates are
// instantiated in this translation unit, so no AVX code can leak into shared
// inline definitions picked by the linker.

#include <immintrin.h>

#include <cmath>
#include <cstdlib>

#include "esqpt/simd/kernels.hpp"

namespace esqpt::simd::detail {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

void rotate_pair(double* x, double* y, std::size_t n, double c, double s) {
  const __m256d vc = _mm256_set1_pd(c);
  const __m256d vs = _mm256_set1_pd(s);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d xk = _mm256_loadu_pd(x + k);
    const __m256d yk = _mm256_loadu_pd(y + k);
    _mm256_storeu_pd(x + k, _mm256_fmsub_pd(vc, xk, _mm256_mul_pd(vs, yk)));
    _mm256_storeu_pd(y + k, _mm256_fmadd_pd(vs, xk, _mm256_mul_pd(vc, yk)));
  }
  for (; k < n; ++k) {
    const double xk = x[k];
    const double yk = y[k];
    x[k] = c * xk - s * yk;
    y[k] = s * xk + c * yk;
  }
}

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 8 <= n; k += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k + 4), _mm256_loadu_pd(b + k + 4), acc1);
  }
  for (; k + 4 <= n; k += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k), acc0);
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; k < n; ++k) acc += a[k] * b[k];
  return acc;
}

void tridiag_apply(const double* diag, const double* off, const double* x, double* y,
                   std::size_t n) {
  if (n == 0) return;
  if (n == 1) {
    y[0] = diag[0] * x[0];
    return;
  }
  // y[i] = off[i-1] x[i-1] + diag[i] x[i] + off[i] x[i+1]; edges handled scalar.
  y[0] = diag[0] * x[0] + off[0] * x[1];
  std::size_t i = 1;
  for (; i + 4 <= n - 1; i += 4) {
    __m256d v = _mm256_mul_pd(_mm256_loadu_pd(diag + i), _mm256_loadu_pd(x + i));
    v = _mm256_fmadd_pd(_mm256_loadu_pd(off + i - 1), _mm256_loadu_pd(x + i - 1), v);
    v = _mm256_fmadd_pd(_mm256_loadu_pd(off + i), _mm256_loadu_pd(x + i + 1), v);
    _mm256_storeu_pd(y + i, v);
  }
  for (; i < n - 1; ++i) y[i] = off[i - 1] * x[i - 1] + diag[i] * x[i] + off[i] * x[i + 1];
  y[n - 1] = off[n - 2] * x[n - 2] + diag[n - 1] * x[n - 1];
}

void echo_block(const double* w, const double* e, std::size_t n_terms, double t0,
                double dt, std::size_t count, double* out) {
  const std::size_t padded = (n_terms + 3) & ~std::size_t{3};
  // re, im, rc, rs, weights in one 32-byte aligned slab; padding lanes carry w = 0.
  double* slab = static_cast<double*>(std::aligned_alloc(32, 5 * padded * sizeof(double)));
  double* re = slab;
  double* im = slab + padded;
  double* rc = slab + 2 * padded;
  double* rs = slab + 3 * padded;
  double* ww = slab + 4 * padded;
  for (std::size_t k = 0; k < padded; ++k) {
    const bool live = k < n_terms;
    const double ek = live ? e[k] : 0.0;
    re[k] = std::cos(ek * t0);
    im[k] = -std::sin(ek * t0);
    rc[k] = std::cos(ek * dt);
    rs[k] = -std::sin(ek * dt);
    ww[k] = live ? w[k] : 0.0;
  }
  for (std::size_t j = 0; j < count; ++j) {
    __m256d sr = _mm256_setzero_pd();
    __m256d si = _mm256_setzero_pd();
    for (std::size_t k = 0; k < padded; k += 4) {
      const __m256d vr = _mm256_load_pd(re + k);
      const __m256d vi = _mm256_load_pd(im + k);
      const __m256d vw = _mm256_load_pd(ww + k);
      const __m256d cr = _mm256_load_pd(rc + k);
      const __m256d cs = _mm256_load_pd(rs + k);
      sr = _mm256_fmadd_pd(vw, vr, sr);
      si = _mm256_fmadd_pd(vw, vi, si);
      _mm256_store_pd(re + k, _mm256_fmsub_pd(vr, cr, _mm256_mul_pd(vi, cs)));
      _mm256_store_pd(im + k, _mm256_fmadd_pd(vr, cs, _mm256_mul_pd(vi, cr)));
    }
    const double a = hsum(sr);
    const double b = hsum(si);
    out[j] = a * a + b * b;
  }
  std::free(slab);
}

}  // namespace

const KernelTable* avx2_table() {
  static const KernelTable table{rotate_pair, dot, tridiag_apply, echo_block};
  return &table;
}

}  // namespace esqpt::simd::detail
