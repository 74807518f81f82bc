#include <atomic>
#include <cstdlib>
#include <cstring>

#include "kernels/pair_rows.hpp"

namespace landau {

bool avx2_supported() {
#if defined(__x86_64__) || defined(__i386__)
  static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return ok;
#else
  return false;
#endif
}

namespace {

SimdLevel detect_level() {
  if (const char* env = std::getenv("LANDAU_LAB_SIMD")) {
    if (std::strcmp(env, "scalar") == 0) return SimdLevel::kScalar;
  }
  return avx2_supported() ? SimdLevel::kAvx2 : SimdLevel::kScalar;
}

std::atomic<SimdLevel>& level_setting() {
  static std::atomic<SimdLevel> level{detect_level()};
  return level;
}

}  // namespace

SimdLevel active_simd_level() { return level_setting().load(); }

void force_simd_level(SimdLevel level) {
  if (level == SimdLevel::kAvx2 && !avx2_supported()) level = SimdLevel::kScalar;
  level_setting().store(level);
}

std::string_view simd_level_name(SimdLevel level) { return level == SimdLevel::kAvx2 ? "avx2" : "scalar"; }

namespace kernels {

const RowKernels& row_kernels(SimdLevel level) {
  static const RowKernels scalar{projection_row_scalar, crossform_row_scalar, flux_row_scalar};
  static const RowKernels avx2{projection_row_avx2, crossform_row_avx2, flux_row_avx2};
  if (level == SimdLevel::kAvx2 && avx2_supported()) return avx2;
  return scalar;
}

}  // namespace kernels
}  // namespace landau
