#pragma once

#include <cstddef>
#include <span>
#include <string_view>

// Dense double-precision inner loops used by the embedding trainers and the
// similarity code. Each instruction set provides the same three kernels; the
// scalar variants are the reference the vector variants are tested against.
//
// The active table is resolved once per process from the CPU features. The
// environment variable DOPPELKIT_ISA=scalar|avx2|neon overrides the choice
// (an unsupported request falls back to scalar).
namespace doppelkit::kernels {

enum class Isa { scalar, avx2, neon };

std::string_view to_string(Isa isa);

struct KernelTable {
  Isa isa;
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // sum_i x[i]^2
  double (*sum_squares)(const double* x, std::size_t n);
};

bool supported(Isa isa);

// Throws doppelkit::Error if `isa` is not available on this machine/build.
const KernelTable& table_for(Isa isa);

const KernelTable& active();

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
double sum_squares(const double* x, std::size_t n);
}  // namespace scalar

namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
double sum_squares(const double* x, std::size_t n);
}  // namespace avx2

namespace neon {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
double sum_squares(const double* x, std::size_t n);
}  // namespace neon

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size());
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  active().axpy(alpha, x.data(), y.data(), x.size());
}

inline double sum_squares(std::span<const double> x) { return active().sum_squares(x.data(), x.size()); }

}  // namespace doppelkit::kernels
