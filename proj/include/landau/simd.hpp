#pragma once

#include <string_view>

namespace landau {

enum class SimdLevel { kScalar, kAvx2 };

/// True when the CPU supports AVX2 and FMA.
bool avx2_supported();

/// Level used by the pair-sum kernels. Picked once from CPU features;
/// LANDAU_LAB_SIMD=scalar forces the reference kernels.
SimdLevel active_simd_level();

/// Overrides the runtime choice (tests use this to compare variants).
/// Requesting AVX2 on a CPU without it falls back to scalar.
void force_simd_level(SimdLevel level);

std::string_view simd_level_name(SimdLevel level);

}  // namespace landau
