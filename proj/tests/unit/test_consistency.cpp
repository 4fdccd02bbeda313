#include <doctest.h>

#include <cmath>
#include <numbers>

#include "support.hpp"
#include "tvlab/consistency.hpp"
#include "tvlab/instance.hpp"
#include "tvlab/linalg.hpp"

using namespace tvlab;
using namespace tvlab::test;

namespace {

ConsistencyWitness complex_witness(const Family& f, const std::vector<ComplexVector>& images) {
  ConsistencyWitness w;
  w.ambient = Ambient::complex;
  w.k = images.front().size();
  for (std::size_t i = 0; i < f.size(); ++i) {
    w.assignment[f.label(i)] = i;
    w.complex_points.push_back(images[i]);
  }
  return w;
}

ConsistencyWitness real_witness(const Family& f, const std::vector<RealVector>& images) {
  ConsistencyWitness w;
  w.ambient = Ambient::real;
  w.k = images.front().size();
  for (std::size_t i = 0; i < f.size(); ++i) {
    w.assignment[f.label(i)] = i;
    w.real_points.push_back(images[i]);
  }
  return w;
}

Family singletons(const std::vector<Complex>& pts) {
  std::vector<std::vector<ComplexVector>> sets;
  for (const auto& p : pts) sets.push_back({ComplexVector{p}});
  return complex_family(sets);
}

}  // namespace

TEST_SUITE("consistency") {
  TEST_CASE("dependences of two labels") {
    const Family f = singletons({0.0, 1.0});
    CHECK(enumerate_dependences(f, complex_witness(f, {{1.0}, {2.0}}), {}).empty());
    const auto deps = enumerate_dependences(f, complex_witness(f, {{1.0}, {1.0}}), {});
    REQUIRE(deps.size() == 1);
    const double r = 1.0 / std::numbers::sqrt2;
    CHECK(std::abs(deps[0].coefficients[0] - r) < 1e-15);
    CHECK(std::abs(deps[0].coefficients[1] + r) < 1e-15);
  }

  TEST_CASE("k = 0 three labels give sampled directions with zero sum") {
    const Family f = singletons({0.0, 1.0, 2.0});
    ConsistencyConfig cfg;
    cfg.samples = 64;
    const auto deps = enumerate_dependences(f, ConsistencyWitness::trivial(f), cfg);
    std::size_t triples = 0;
    for (const auto& d : deps) {
      Complex s = 0.0;
      for (const auto& a : d.coefficients) s += a;
      CHECK(std::abs(s) <= 1e-12);
      CHECK(std::abs(hermitian_norm(d.coefficients) - 1.0) < 1e-12);
      triples += d.support.size() == 3;
    }
    CHECK(triples == 64);
    CHECK(deps.size() == 3 + 64);
  }

  TEST_CASE("dependence enumeration is reproducible and seeded") {
    Rng rng(401);
    const Family f = random_complex_family(rng, 1, 4, 3);
    ConsistencyConfig cfg;
    const auto w = ConsistencyWitness::trivial(f);
    const auto a = enumerate_dependences(f, w, cfg);
    const auto b = enumerate_dependences(f, w, cfg);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].coefficients == b[i].coefficients);
    cfg.seed = 1;
    const auto c = enumerate_dependences(f, w, cfg);
    CHECK(c.back().coefficients != a.back().coefficients);
  }

  TEST_CASE("lifting fixtures") {
    const Complex p{0.3, -0.2};
    const AffineDependence cancel{{0, 1}, {1.0, -1.0}};
    const Family same = singletons({p, p});
    auto lift = lift_dependence(same, cancel);
    REQUIRE(lift.lifted());
    CHECK(lift.lift->r[0] == doctest::Approx(lift.lift->r[1]));
    CHECK(std::abs(lift.lift->points[0][0] - p) < 1e-12);
    CHECK(lift.lift->residual() < 1e-9);

    const Family apart = singletons({0.0, 1.0});
    CHECK_FALSE(lift_dependence(apart, cancel).lifted());
    CHECK_FALSE(lift_dependence(apart, cancel, Arithmetic::rational).lifted());
  }

  TEST_CASE("segments through a common point lift every dependence") {
    const Family f = complex_family({segment({-1, 0}, {1, 0}), segment({0, -1}, {0, 1}), segment({-1, -1}, {1, 1})});
    ConsistencyConfig cfg;
    cfg.samples = 128;
    for (const auto& dep : enumerate_dependences(f, ConsistencyWitness::trivial(f), cfg)) {
      const auto out = lift_dependence(f, dep);
      REQUIRE(out.lifted());
      CHECK(out.lift->residual() < 1e-9);
    }
  }

  TEST_CASE("lifting is invariant under complex rescaling") {
    Rng rng(409);
    int lifted = 0;
    for (int t = 0; t < 200; ++t) {
      const Family f = random_complex_family(rng, 1, 3, 3);
      ConsistencyConfig cfg;
      cfg.samples = 2;
      cfg.seed = static_cast<std::uint64_t>(t);
      for (const auto& dep : enumerate_dependences(f, ConsistencyWitness::trivial(f), cfg)) {
        AffineDependence scaled = dep;
        const Complex lambda = rng.complex_normal();
        for (auto& a : scaled.coefficients) a *= lambda;
        const bool a = lift_dependence(f, dep, Arithmetic::rational).lifted();
        CHECK(a == lift_dependence(f, scaled, Arithmetic::rational).lifted());
        lifted += a;
      }
    }
    CHECK(lifted > 0);
  }

  TEST_CASE("disjoint singletons on one image fail with an exact certificate") {
    const Family f = singletons({{0.0, 0.0}, {1.0, 2.0}});
    const auto v = check_dependency_consistency(f, complex_witness(f, {{0.5}, {0.5}}));
    CHECK_FALSE(v.pass);
    CHECK(v.exact_confirmed);
    REQUIRE(v.violation);
    CHECK(v.violation->support == std::vector<std::size_t>{0, 1});
    CHECK(std::abs(v.violation->coefficients[0] + v.violation->coefficients[1]) < 1e-12);
  }

  TEST_CASE("triangle of segments without a common point fails") {
    const Family f = complex_family({segment({0, 0}, {4, 0}), segment({0, 0}, {2, 3}), segment({4, 0}, {2, 3})});
    ConsistencyConfig cfg;
    cfg.samples = 64;
    const auto v = check_dependency_consistency(f, ConsistencyWitness::trivial(f), cfg);
    CHECK_FALSE(v.pass);
    CHECK(v.exact_confirmed);
    REQUIRE(v.violation);
    CHECK(v.violation->support.size() == 3);
    CHECK(v.violation->residual({{}, {}, {}}) < 1e-9);
    CHECK_FALSE(lift_dependence(f, *v.violation, Arithmetic::rational).lifted());
  }

  TEST_CASE("planted instances pass with the witness read off the transversal") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      InstanceSpec spec;
      spec.d = 2 + seed % 2;
      spec.n_sets = 3 + seed % 3;
      spec.planted = true;
      spec.seed = seed;
      const Instance inst = gen_instance(spec);
      const auto w = witness_from_transversal(inst.family, *inst.planted);
      ConsistencyConfig cfg;
      cfg.samples = 16;
      CHECK(check_dependency_consistency(inst.family, w, cfg).pass);
    }
  }

  TEST_CASE("real separation fixtures") {
    const Family common = real_family({{{0, 0}, {1, 1}}, {{1, 0}, {0, 1}}, {{0.5, 0.5}}});
    CHECK(separates_consistently(common, real_witness(common, {{0.0}, {0.0}, {0.0}})).pass);

    const Family apart = real_family({{{0, 0}, {0, 1}}, {{2, 0}, {2, 1}}});
    const auto v = separates_consistently(apart, real_witness(apart, {{0.0}, {0.0}}), Arithmetic::rational);
    CHECK_FALSE(v.pass);
    REQUIRE(v.violating_pair);
    CHECK(v.violating_pair->first == std::vector<std::size_t>{0});
    CHECK(v.violating_pair->second == std::vector<std::size_t>{1});

    const Family bars = real_family({{{0, -1}, {0, 1}}, {{1, -1}, {1, 1}}, {{2, -1}, {2, 1}}});
    const auto ok = separates_consistently(bars, real_witness(bars, {{0.0}, {1.0}, {2.0}}));
    CHECK(ok.pass);
    // Pairs of total size 2 and 3, with idx[0] fixed in the first part: 3 + 3.
    CHECK(ok.dependences_checked == 6);
  }

  TEST_CASE("support reduction keeps both dependence equations") {
    Rng rng(419);
    for (int t = 0; t < 100; ++t) {
      const std::size_t k = 1 + rng.index(3);
      const std::size_t n = std::min<std::size_t>(10, 2 * k + 4 + rng.index(4));
      std::vector<ComplexVector> images(n);
      for (auto& p : images) p = box_vector(rng, k);
      // Generic combination of the null space, so every a_F is nonzero.
      std::vector<ComplexVector> rows(k + 1, ComplexVector(n));
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t c = 0; c < k; ++c) rows[c][j] = images[j][c];
        rows[k][j] = 1.0;
      }
      const auto basis = linalg::null_space(rows, n);
      REQUIRE(basis.size() == n - k - 1);
      AffineDependence full;
      full.coefficients.assign(n, 0.0);
      for (std::size_t j = 0; j < n; ++j) full.support.push_back(j);
      for (const auto& b : basis) {
        const Complex w = rng.complex_normal();
        for (std::size_t j = 0; j < n; ++j) full.coefficients[j] += w * b[j];
      }
      REQUIRE(full.residual(images) < 1e-9);
      const auto red = reduce_support(full, images, k);
      CHECK(red.dependence.support.size() <= 2 * k + 3);
      CHECK(red.dependence.residual(images) <= 1e-9);
      for (std::size_t i = 0; i < red.scales.size(); ++i) CHECK(red.scales[i] > 0.0);
    }
  }
}
