#include <cstdlib>
#include <string_view>

#include "compacton/error.hpp"
#include "compacton/kernels.hpp"

namespace compacton::kernels {
namespace {

const KernelTable* initial_table() {
  if (const char* env = std::getenv("COMPACTON_KERNELS")) {
    if (std::string_view(env) == "scalar") return &scalar_table();
  }
  if (const KernelTable* t = avx2_table()) return t;
  return &scalar_table();
}

const KernelTable*& current() {
  static const KernelTable* table = initial_table();
  return table;
}

}  // namespace

const KernelTable& active() { return *current(); }

void select(Isa isa) {
  if (isa == Isa::scalar) {
    current() = &scalar_table();
    return;
  }
  const KernelTable* t = avx2_table();
  if (t == nullptr) throw InvalidArgument("AVX2 kernels are not available on this CPU");
  current() = t;
}

}  // namespace compacton::kernels
