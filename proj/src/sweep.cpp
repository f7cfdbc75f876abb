#include "esqpt/sweep.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace esqpt {

unsigned resolve_jobs(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("ESQPT_JOBS"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v <= 0)
      throw std::invalid_argument("ESQPT_JOBS must be a positive integer, got '" + std::string(env) + "'");
    return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace esqpt
