#include <cstdlib>
#include <string_view>

#include "gmelab/simd/kernels.hpp"

namespace gmelab::simd {

#if defined(GMELAB_HAVE_AVX2)
const kernel_table& avx2_kernel_table() noexcept;
#endif

std::string_view to_string(isa id) noexcept {
  switch (id) {
    case isa::scalar: return "scalar";
    case isa::avx2: return "avx2";
  }
  return "unknown";
}

const kernel_table* avx2_kernels() noexcept {
#if defined(GMELAB_HAVE_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? &avx2_kernel_table() : nullptr;
#else
  return nullptr;
#endif
}

namespace {

const kernel_table& select() noexcept {
  if (const char* env = std::getenv("GMELAB_SIMD")) {
    if (std::string_view(env) == "scalar") return scalar_kernels();
  }
  if (const kernel_table* t = avx2_kernels()) return *t;
  return scalar_kernels();
}

}  // namespace

const kernel_table& active() noexcept {
  static const kernel_table& table = select();
  return table;
}

}  // namespace gmelab::simd
