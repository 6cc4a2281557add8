#include <cstdlib>
#include <string>

#include "doppelkit/error.hpp"
#include "doppelkit/kernels/kernels.hpp"

namespace doppelkit::kernels {

namespace {

constexpr KernelTable kScalar{Isa::scalar, &scalar::dot, &scalar::axpy, &scalar::sum_squares};
#if defined(DOPPELKIT_HAVE_AVX2)
constexpr KernelTable kAvx2{Isa::avx2, &avx2::dot, &avx2::axpy, &avx2::sum_squares};
#endif
#if defined(DOPPELKIT_HAVE_NEON)
constexpr KernelTable kNeon{Isa::neon, &neon::dot, &neon::axpy, &neon::sum_squares};
#endif

const KernelTable& resolve() {
  if (const char* env = std::getenv("DOPPELKIT_ISA")) {
    const std::string_view want(env);
    for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
      if (want == to_string(isa) && supported(isa)) return table_for(isa);
    }
    return kScalar;
  }
  if (supported(Isa::avx2)) return table_for(Isa::avx2);
  if (supported(Isa::neon)) return table_for(Isa::neon);
  return kScalar;
}

}  // namespace

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
    case Isa::neon:
      return "neon";
  }
  return "scalar";
}

bool supported(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(DOPPELKIT_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::neon:
#if defined(DOPPELKIT_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& table_for(Isa isa) {
  if (!supported(isa)) throw Error("UnsupportedIsa", std::string(to_string(isa)) + " kernels are not available");
  switch (isa) {
#if defined(DOPPELKIT_HAVE_AVX2)
    case Isa::avx2:
      return kAvx2;
#endif
#if defined(DOPPELKIT_HAVE_NEON)
    case Isa::neon:
      return kNeon;
#endif
    default:
      return kScalar;
  }
}

const KernelTable& active() {
  static const KernelTable& table = resolve();
  return table;
}

}  // namespace doppelkit::kernels
