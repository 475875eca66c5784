#pragma once

#include "neurank/kernels.h"

namespace neurank::kernels::detail {

extern const KernelTable kScalarTable;
#if defined(NEURANK_HAVE_AVX2)
extern const KernelTable kAvx2Table;
#endif

}  // namespace neurank::kernels::detail
