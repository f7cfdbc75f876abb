#include <arm_neon.h>

#include <cmath>
#include <cstdlib>

#include "esqpt/simd/kernels.hpp"

namespace esqpt::simd::detail {
namespace {

void rotate_pair(double* x, double* y, std::size_t n, double c, double s) {
  const float64x2_t vc = vdupq_n_f64(c);
  const float64x2_t vs = vdupq_n_f64(s);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const float64x2_t xk = vld1q_f64(x + k);
    const float64x2_t yk = vld1q_f64(y + k);
    vst1q_f64(x + k, vfmsq_f64(vmulq_f64(vc, xk), vs, yk));
    vst1q_f64(y + k, vfmaq_f64(vmulq_f64(vc, yk), vs, xk));
  }
  for (; k < n; ++k) {
    const double xk = x[k];
    const double yk = y[k];
    x[k] = c * xk - s * yk;
    y[k] = s * xk + c * yk;
  }
}

double dot(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) acc = vfmaq_f64(acc, vld1q_f64(a + k), vld1q_f64(b + k));
  double r = vaddvq_f64(acc);
  for (; k < n; ++k) r += a[k] * b[k];
  return r;
}

void tridiag_apply(const double* diag, const double* off, const double* x, double* y,
                   std::size_t n) {
  if (n == 0) return;
  if (n == 1) {
    y[0] = diag[0] * x[0];
    return;
  }
  y[0] = diag[0] * x[0] + off[0] * x[1];
  std::size_t i = 1;
  for (; i + 2 <= n - 1; i += 2) {
    float64x2_t v = vmulq_f64(vld1q_f64(diag + i), vld1q_f64(x + i));
    v = vfmaq_f64(v, vld1q_f64(off + i - 1), vld1q_f64(x + i - 1));
    v = vfmaq_f64(v, vld1q_f64(off + i), vld1q_f64(x + i + 1));
    vst1q_f64(y + i, v);
  }
  for (; i < n - 1; ++i) y[i] = off[i - 1] * x[i - 1] + diag[i] * x[i] + off[i] * x[i + 1];
  y[n - 1] = off[n - 2] * x[n - 2] + diag[n - 1] * x[n - 1];
}

void echo_block(const double* w, const double* e, std::size_t n_terms, double t0,
                double dt, std::size_t count, double* out) {
  const std::size_t padded = (n_terms + 1) & ~std::size_t{1};
  double* slab = static_cast<double*>(std::malloc(5 * padded * sizeof(double)));
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
    float64x2_t sr = vdupq_n_f64(0.0);
    float64x2_t si = vdupq_n_f64(0.0);
    for (std::size_t k = 0; k < padded; k += 2) {
      const float64x2_t vr = vld1q_f64(re + k);
      const float64x2_t vi = vld1q_f64(im + k);
      const float64x2_t vw = vld1q_f64(ww + k);
      const float64x2_t cr = vld1q_f64(rc + k);
      const float64x2_t cs = vld1q_f64(rs + k);
      sr = vfmaq_f64(sr, vw, vr);
      si = vfmaq_f64(si, vw, vi);
      vst1q_f64(re + k, vfmsq_f64(vmulq_f64(vr, cr), vi, cs));
      vst1q_f64(im + k, vfmaq_f64(vmulq_f64(vi, cr), vr, cs));
    }
    const double a = vaddvq_f64(sr);
    const double b = vaddvq_f64(si);
    out[j] = a * a + b * b;
  }
  std::free(slab);
}

}  // namespace

const KernelTable* neon_table() {
  static const KernelTable table{rotate_pair, dot, tridiag_apply, echo_block};
  return &table;
}

}  // namespace esqpt::simd::detail
