#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "esqpt/simd/kernels.hpp"

namespace esqpt::simd {

namespace detail {
#if !defined(ESQPT_HAVE_AVX2)
const KernelTable* avx2_table() { return nullptr; }
#endif
#if !defined(ESQPT_HAVE_NEON)
const KernelTable* neon_table() { return nullptr; }
#endif
}  // namespace detail

std::string_view backend_name(Backend b) {
  switch (b) {
    case Backend::scalar: return "scalar";
    case Backend::avx2: return "avx2";
    case Backend::neon: return "neon";
  }
  return "unknown";
}

Backend parse_backend(std::string_view name) {
  if (name == "scalar") return Backend::scalar;
  if (name == "avx2") return Backend::avx2;
  if (name == "neon") return Backend::neon;
  throw std::invalid_argument("unknown SIMD backend '" + std::string(name) + "'");
}

bool backend_available(Backend b) {
  switch (b) {
    case Backend::scalar: return true;
    case Backend::avx2:
#if defined(ESQPT_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return detail::avx2_table() != nullptr && __builtin_cpu_supports("avx2") &&
             __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Backend::neon: return detail::neon_table() != nullptr;
  }
  return false;
}

namespace {

Backend detect() {
  if (const char* env = std::getenv("ESQPT_SIMD"); env != nullptr && *env != '\0') {
    const Backend b = parse_backend(env);
    if (!backend_available(b))
      throw std::runtime_error("ESQPT_SIMD=" + std::string(env) + " is not available on this CPU");
    return b;
  }
  if (backend_available(Backend::avx2)) return Backend::avx2;
  if (backend_available(Backend::neon)) return Backend::neon;
  return Backend::scalar;
}

struct Active {
  std::atomic<int> backend;
  std::atomic<const KernelTable*> table;
};

Active& current();

}  // namespace

const KernelTable& kernels(Backend b) {
  switch (b) {
    case Backend::avx2:
      if (backend_available(b)) return *detail::avx2_table();
      break;
    case Backend::neon:
      if (backend_available(b)) return *detail::neon_table();
      break;
    case Backend::scalar: return detail::scalar_table();
  }
  throw std::runtime_error("SIMD backend '" + std::string(backend_name(b)) + "' is not available");
}

namespace {

Active& current() {
  static const Backend initial = detect();
  static Active a{static_cast<int>(initial), &kernels(initial)};
  return a;
}

}  // namespace

Backend active_backend() { return static_cast<Backend>(current().backend.load(std::memory_order_relaxed)); }

void set_backend(Backend b) {
  const KernelTable& t = kernels(b);
  Active& a = current();
  a.backend.store(static_cast<int>(b));
  a.table.store(&t);
}

const KernelTable& kernels() { return *current().table.load(std::memory_order_relaxed); }

}  // namespace esqpt::simd
