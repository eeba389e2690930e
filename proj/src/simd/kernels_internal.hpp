#pragma once

#include "narrascope/simd/kernels.hpp"

namespace narrascope::simd::detail {

const KernelTable& scalar_table();

#if defined(NARRASCOPE_HAVE_AVX2)
const KernelTable& avx2_table();
#endif

}  // namespace narrascope::simd::detail
