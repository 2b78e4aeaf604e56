#include <cstdlib>
#include <string_view>

#include "fftg/simd.hpp"

namespace fftg::simd {
namespace {

bool cpu_supports(const KernelTable& table) {
  switch (table.isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::Neon:
      // Baseline on AArch64; the table only exists there.
      return true;
  }
  return false;
}

const KernelTable& choose() {
  const auto tables = available_kernels();
  if (const char* forced = std::getenv("FFTG_SIMD")) {
    for (const KernelTable* t : tables) {
      if (t->name == std::string_view(forced)) return *t;
    }
  }
  return *tables.back();
}

}  // namespace

std::vector<const KernelTable*> available_kernels() {
  std::vector<const KernelTable*> out{&scalar_kernels()};
  for (const KernelTable* t : {avx2_kernels(), neon_kernels()}) {
    if (t != nullptr && cpu_supports(*t)) out.push_back(t);
  }
  return out;
}

const KernelTable& active_kernels() {
  static const KernelTable& table = choose();
  return table;
}

}  // namespace fftg::simd
