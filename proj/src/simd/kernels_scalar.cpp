#include <cmath>
#include <vector>

#include "esqpt/simd/kernels.hpp"

namespace esqpt::simd::detail {
namespace {

void rotate_pair(double* x, double* y, std::size_t n, double c, double s) {
  for (std::size_t k = 0; k < n; ++k) {
    const double xk = x[k];
    const double yk = y[k];
    x[k] = c * xk - s * yk;
    y[k] = s * xk + c * yk;
  }
}

double dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) acc += a[k] * b[k];
  return acc;
}

void tridiag_apply(const double* diag, const double* off, const double* x, double* y,
                   std::size_t n) {
  if (n == 0) return;
  for (std::size_t i = 0; i < n; ++i) y[i] = diag[i] * x[i];
  for (std::size_t i = 0; i + 1 < n; ++i) {
    y[i] += off[i] * x[i + 1];
    y[i + 1] += off[i] * x[i];
  }
}

void echo_block(const double* w, const double* e, std::size_t n_terms, double t0,
                double dt, std::size_t count, double* out) {
  std::vector<double> re(n_terms), im(n_terms), rc(n_terms), rs(n_terms);
  for (std::size_t k = 0; k < n_terms; ++k) {
    re[k] = std::cos(e[k] * t0);
    im[k] = -std::sin(e[k] * t0);
    rc[k] = std::cos(e[k] * dt);
    rs[k] = -std::sin(e[k] * dt);
  }
  for (std::size_t j = 0; j < count; ++j) {
    double sr = 0.0, si = 0.0;
    for (std::size_t k = 0; k < n_terms; ++k) {
      sr += w[k] * re[k];
      si += w[k] * im[k];
      const double nr = re[k] * rc[k] - im[k] * rs[k];
      const double ni = re[k] * rs[k] + im[k] * rc[k];
      re[k] = nr;
      im[k] = ni;
    }
    out[j] = sr * sr + si * si;
  }
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{rotate_pair, dot, tridiag_apply, echo_block};
  return table;
}

}  // namespace esqpt::simd::detail
