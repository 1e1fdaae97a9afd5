// Runtime backend selection.

#include "mirt/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace mirt::kernels {

bool avx2_available() {
#if defined(MIRT_HAVE_AVX2_BUILD) && (defined(__x86_64__) || defined(_M_X64))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

#if !defined(MIRT_HAVE_AVX2_BUILD) || !(defined(__x86_64__) || defined(_M_X64))
// Not built for this target; never selected because avx2_available() is false.
const Backend& avx2_backend() { return scalar_backend(); }
#endif

namespace {

const Backend* default_backend() {
#if defined(MIRT_HAVE_AVX2_BUILD) && (defined(__x86_64__) || defined(_M_X64))
  if (const char* env = std::getenv("MIRT_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) return &scalar_backend();
    if (std::strcmp(env, "avx2") == 0 && avx2_available()) return &avx2_backend();
  }
  if (avx2_available()) return &avx2_backend();
#endif
  return &scalar_backend();
}

const Backend*& active_slot() {
  static const Backend* slot = default_backend();
  return slot;
}

}  // namespace

const Backend& active() { return *active_slot(); }
void set_active(const Backend& b) { active_slot() = &b; }
void reset_active() { active_slot() = default_backend(); }

}  // namespace mirt::kernels
