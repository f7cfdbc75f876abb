#pragma once

// Data-parallel inner loops behind the eigensolver, the quench observables and
// the Loschmidt-echo time series. Every backend implements the same contract;
// results agree with the scalar reference to rounding (see test_kernels).
//
// Backends are selected once at runtime. ESQPT_SIMD=scalar|avx2|neon in the
// environment overrides the automatic choice.

#include <cstddef>
#include <string_view>

namespace esqpt::simd {

enum class Backend { scalar, avx2, neon };

struct KernelTable {
  // x <- c x - s y,  y <- s x + c y   (Givens rotation of two columns)
  void (*rotate_pair)(double* x, double* y, std::size_t n, double c, double s);

  double (*dot)(const double* a, const double* b, std::size_t n);

  // y = T x for the symmetric tridiagonal T = (diag, off)
  void (*tridiag_apply)(const double* diag, const double* off, const double* x,
                        double* y, std::size_t n);

  // out[j] = | sum_k w[k] exp(-i e[k] (t0 + j dt)) |^2  for j < count.
  // Phases are seeded exactly at t0 and advanced by a per-term rotation, so
  // callers keep count small (a few hundred) to bound drift.
  void (*echo_block)(const double* w, const double* e, std::size_t n_terms,
                     double t0, double dt, std::size_t count, double* out);
};

std::string_view backend_name(Backend b);
bool backend_available(Backend b);
Backend parse_backend(std::string_view name);

Backend active_backend();
void set_backend(Backend b);  // throws std::runtime_error if unavailable

const KernelTable& kernels();
const KernelTable& kernels(Backend b);

namespace detail {
const KernelTable& scalar_table();
const KernelTable* avx2_table();  // nullptr when not compiled in
const KernelTable* neon_table();
}  // namespace detail

}  // namespace esqpt::simd
