#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "tvlab/kernels.hpp"

using namespace tvlab;
using namespace tvlab::test;

namespace {

RealVector random_doubles(Rng& rng, std::size_t n) {
  RealVector v(n);
  for (auto& x : v) x = rng.uniform(-3.0, 3.0);
  return v;
}

}  // namespace

TEST_SUITE("kernels") {
  TEST_CASE("isa selection") {
    CHECK(kernels::isa_available(kernels::Isa::scalar));
    const auto before = kernels::active_isa();
    kernels::set_isa(kernels::Isa::scalar);
    CHECK(kernels::active_isa() == kernels::Isa::scalar);
    if (kernels::isa_available(kernels::Isa::avx2)) {
      kernels::set_isa(kernels::Isa::avx2);
      CHECK(kernels::active_isa() == kernels::Isa::avx2);
    } else {
      CHECK_THROWS(kernels::set_isa(kernels::Isa::avx2));
    }
    kernels::set_isa(before);
    CHECK(std::string(kernels::isa_name(kernels::Isa::scalar)) == "scalar");
  }

  TEST_CASE("projection kernel: vector variant equals scalar reference") {
    if (!kernels::isa_available(kernels::Isa::avx2)) return;
    Rng rng(101);
    for (std::size_t d = 1; d <= 9; ++d) {
      for (std::size_t n = 0; n <= 13; ++n) {
        const auto verts = random_doubles(rng, 2 * d * n);
        const auto dir = box_vector(rng, d, 2.0);
        ComplexVector a(n), b(n);
        kernels::scalar::project_coefficients(verts, dir, a);
        kernels::avx2::project_coefficients(verts, dir, b);
        for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(a[k] - b[k]) <= 1e-13 * (1.0 + std::abs(a[k])));
      }
    }
  }

  TEST_CASE("projection kernel is exactly odd in the direction") {
    Rng rng(103);
    for (auto isa : {kernels::Isa::scalar, kernels::Isa::avx2}) {
      if (!kernels::isa_available(isa)) continue;
      kernels::set_isa(isa);
      for (int t = 0; t < 300; ++t) {
        const std::size_t d = 1 + rng.index(6);
        const std::size_t n = 1 + rng.index(9);
        const auto verts = random_doubles(rng, 2 * d * n);
        auto dir = box_vector(rng, d);
        ComplexVector a(n), b(n);
        kernels::project_coefficients(verts, dir, a);
        for (auto& c : dir) c = -c;
        kernels::project_coefficients(verts, dir, b);
        for (std::size_t k = 0; k < n; ++k) CHECK(a[k] == -b[k]);
      }
    }
    kernels::set_isa(kernels::isa_available(kernels::Isa::avx2) ? kernels::Isa::avx2 : kernels::Isa::scalar);
  }

  TEST_CASE("support interval: vector variant equals scalar reference") {
    if (!kernels::isa_available(kernels::Isa::avx2)) return;
    Rng rng(107);
    for (std::size_t d = 1; d <= 7; ++d) {
      for (std::size_t n = 1; n <= 17; ++n) {
        const auto verts = random_doubles(rng, d * n);
        const auto u = random_doubles(rng, d);
        const auto a = kernels::scalar::support_interval(verts, u);
        const auto b = kernels::avx2::support_interval(verts, u);
        CHECK(std::abs(a.lo - b.lo) <= 1e-13);
        CHECK(std::abs(a.hi - b.hi) <= 1e-13);
      }
    }
  }

  TEST_CASE("support interval matches a direct loop") {
    const RealVector verts{0.0, 0.0, 2.0, 1.0, -1.0, 3.0};
    const RealVector u{1.0, -1.0};
    const auto iv = kernels::support_interval(verts, u);
    CHECK(iv.lo == -4.0);
    CHECK(iv.hi == 1.0);
  }

  TEST_CASE("dispatcher checks buffer sizes") {
    ComplexVector out(2);
    const RealVector verts(6, 0.0);
    const ComplexVector dir{1.0, 0.0};
    CHECK_THROWS_AS(kernels::project_coefficients(verts, dir, out), DimensionError);
  }
}
