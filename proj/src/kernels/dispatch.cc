#include <atomic>
#include <cstdlib>
#include <string>

#include "kernels/kernels_internal.h"
#include "neurank/error.h"

namespace neurank::kernels {
namespace {

const KernelTable* resolve_default() {
  if (const char* env = std::getenv("NEURANK_KERNELS")) {
    const std::string_view choice(env);
    if (choice == "scalar") return &detail::kScalarTable;
    if (choice == "avx2" && avx2_table() != nullptr) return avx2_table();
  }
  if (const KernelTable* t = avx2_table()) return t;
  return &detail::kScalarTable;
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> table{resolve_default()};
  return table;
}

}  // namespace

const KernelTable& scalar_table() { return detail::kScalarTable; }

bool cpu_supports(Backend backend) {
  switch (backend) {
    case Backend::kScalar:
      return true;
    case Backend::kAvx2:
#if defined(NEURANK_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

const KernelTable* avx2_table() {
#if defined(NEURANK_HAVE_AVX2)
  if (cpu_supports(Backend::kAvx2)) return &detail::kAvx2Table;
#endif
  return nullptr;
}

const KernelTable& active() {
  return *current().load(std::memory_order_relaxed);
}

void set_backend(Backend backend) {
  const KernelTable* t =
      backend == Backend::kScalar ? &detail::kScalarTable : avx2_table();
  if (t == nullptr) {
    throw ValidationError("kernel backend '" + std::string(backend_name(backend)) +
                          "' is not available on this machine");
  }
  current().store(t, std::memory_order_relaxed);
}

std::string_view backend_name(Backend backend) {
  switch (backend) {
    case Backend::kScalar:
      return "scalar";
    case Backend::kAvx2:
      return "avx2";
  }
  return "unknown";
}

}  // namespace neurank::kernels
