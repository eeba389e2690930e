#include <atomic>
#include <cstdlib>
#include <string>

#include "kernels_internal.hpp"
#include "narrascope/error.hpp"

namespace narrascope::simd {
namespace {

bool cpu_has_avx2() {
#if defined(NARRASCOPE_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* best_available() {
  if (const KernelTable* t = kernels_for(Isa::kAvx2)) return t;
  return &detail::scalar_table();
}

const KernelTable* initial_selection() {
  const char* env = std::getenv("NARRASCOPE_SIMD");
  if (env == nullptr) return best_available();
  const std::optional<Isa> requested = parse_isa(env);
  if (!requested) return best_available();  // "auto" or unrecognized
  if (const KernelTable* t = kernels_for(*requested)) return t;
  return &detail::scalar_table();
}

std::atomic<const KernelTable*>& active_slot() {
  static std::atomic<const KernelTable*> slot{initial_selection()};
  return slot;
}

}  // namespace

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::kScalar: return "scalar";
    case Isa::kAvx2: return "avx2";
  }
  return "unknown";
}

std::optional<Isa> parse_isa(std::string_view name) {
  if (name == "scalar") return Isa::kScalar;
  if (name == "avx2") return Isa::kAvx2;
  return std::nullopt;
}

const KernelTable& scalar_kernels() { return detail::scalar_table(); }

const KernelTable* kernels_for(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return &detail::scalar_table();
    case Isa::kAvx2:
#if defined(NARRASCOPE_HAVE_AVX2)
      if (cpu_has_avx2()) return &detail::avx2_table();
#endif
      return nullptr;
  }
  return nullptr;
}

bool isa_supported(Isa isa) { return kernels_for(isa) != nullptr; }

const KernelTable& active_kernels() {
  return *active_slot().load(std::memory_order_acquire);
}

void select_isa(Isa isa) {
  const KernelTable* t = kernels_for(isa);
  if (t == nullptr) {
    throw Error(ErrorKind::kInvalidArgument,
                "SIMD variant not available on this host: " +
                    std::string(to_string(isa)));
  }
  active_slot().store(t, std::memory_order_release);
}

}  // namespace narrascope::simd
