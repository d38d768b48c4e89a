#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "usvauv/kernels/kernels.hpp"

namespace usvauv::kernels {

#ifdef USVAUV_HAVE_AVX2
const KernelTable* avx2_table_impl();
#endif

namespace {

std::atomic<const KernelTable*> g_active{nullptr};

const KernelTable& resolve() {
  if (const char* env = std::getenv("USVAUV_ISA"); env != nullptr && *env != '\0') {
    const Isa wanted = parse_isa(env);
    if (cpu_supports(wanted)) return wanted == Isa::Avx2 ? *avx2_table() : scalar_table();
  }
  return best_isa() == Isa::Avx2 ? *avx2_table() : scalar_table();
}

}  // namespace

std::string_view isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

Isa parse_isa(std::string_view name) {
  if (name == "scalar") return Isa::Scalar;
  if (name == "avx2") return Isa::Avx2;
  throw std::invalid_argument("unknown kernel ISA '" + std::string(name) + "'");
}

const KernelTable* avx2_table() {
#ifdef USVAUV_HAVE_AVX2
  return avx2_table_impl();
#else
  return nullptr;
#endif
}

bool cpu_supports(Isa isa) {
  if (isa == Isa::Scalar) return true;
#if defined(USVAUV_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa best_isa() { return cpu_supports(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar; }

const KernelTable& active() {
  const KernelTable* t = g_active.load(std::memory_order_acquire);
  if (t == nullptr) {
    t = &resolve();
    g_active.store(t, std::memory_order_release);
  }
  return *t;
}

Isa active_isa() { return active().isa; }

void set_isa(Isa isa) {
  if (!cpu_supports(isa))
    throw std::invalid_argument("kernel ISA '" + std::string(isa_name(isa)) +
                                "' not available on this CPU/build");
  g_active.store(isa == Isa::Avx2 ? avx2_table() : &scalar_table(), std::memory_order_release);
}

}  // namespace usvauv::kernels
