#include <doctest.h>

#include <cmath>
#include <vector>

#include "doppelkit/error.hpp"
#include "doppelkit/kernels/kernels.hpp"
#include "doppelkit/random.hpp"

using namespace doppelkit;
namespace k = doppelkit::kernels;

namespace {

std::vector<double> randn(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.normal();
  return v;
}

// Reassociation error bound for a length-n sum of products.
double tolerance(std::size_t n, double magnitude) { return 1e-15 * static_cast<double>(n + 1) * (magnitude + 1); }

}  // namespace

TEST_CASE("scalar kernels") {
  const std::vector<double> a = {1, 2, 3};
  const std::vector<double> b = {4, -5, 6};
  CHECK(k::scalar::dot(a.data(), b.data(), 3) == 12);
  CHECK(k::scalar::sum_squares(a.data(), 3) == 14);
  std::vector<double> y = {1, 1, 1};
  k::scalar::axpy(2, a.data(), y.data(), 3);
  CHECK(y == std::vector<double>{3, 5, 7});
  CHECK(k::scalar::dot(a.data(), b.data(), 0) == 0);
}

TEST_CASE("every supported instruction set matches the scalar reference") {
  CHECK(k::supported(k::Isa::scalar));
  CHECK(k::table_for(k::Isa::scalar).isa == k::Isa::scalar);
  Rng rng(3);
  for (k::Isa isa : {k::Isa::scalar, k::Isa::avx2, k::Isa::neon}) {
    if (!k::supported(isa)) {
      CHECK_THROWS_AS(k::table_for(isa), Error);
      continue;
    }
    const auto& t = k::table_for(isa);
    CHECK(t.isa == isa);
    for (std::size_t n = 0; n <= 67; ++n) {
      CAPTURE(n);
      // Offset by one element so unaligned loads are exercised.
      auto a = randn(rng, n + 1);
      auto b = randn(rng, n + 1);
      const double* pa = a.data() + 1;
      const double* pb = b.data() + 1;
      const double ref = k::scalar::dot(pa, pb, n);
      double mag = 0;
      for (std::size_t i = 0; i < n; ++i) mag += std::abs(pa[i] * pb[i]);
      CHECK(std::abs(t.dot(pa, pb, n) - ref) <= tolerance(n, mag));
      const double ss = k::scalar::sum_squares(pa, n);
      CHECK(std::abs(t.sum_squares(pa, n) - ss) <= tolerance(n, ss));

      // axpy is elementwise, so results must be bit-identical up to FMA
      // contraction (one rounding instead of two).
      auto y1 = randn(rng, n + 1);
      auto y2 = y1;
      const double alpha = rng.normal();
      k::scalar::axpy(alpha, pa, y1.data() + 1, n);
      t.axpy(alpha, pa, y2.data() + 1, n);
      CHECK(y1[0] == y2[0]);
      for (std::size_t i = 1; i <= n; ++i) CHECK(std::abs(y1[i] - y2[i]) <= 1e-15 * (std::abs(y1[i]) + 1));
    }
  }
}

TEST_CASE("active table is one of the supported ones") {
  const auto& t = k::active();
  CHECK(k::supported(t.isa));
  CHECK(&t == &k::active());
  const std::vector<double> a = {3, 4};
  CHECK(k::sum_squares(a) == 25);
}
