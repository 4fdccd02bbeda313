#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "tvlab/instance.hpp"
#include "tvlab/linalg.hpp"
#include "tvlab/lp.hpp"

using namespace tvlab;
using namespace tvlab::test;

TEST_SUITE("instance") {
  TEST_CASE("serialization round trip is byte identical") {
    for (auto ambient : {Ambient::complex, Ambient::real}) {
      for (std::uint64_t seed = 0; seed < 10; ++seed) {
        InstanceSpec spec;
        spec.d = 1 + seed % 3;
        spec.n_sets = 2 + seed % 4;
        spec.planted = seed % 2 == 0;
        spec.seed = seed;
        spec.ambient = ambient;
        Instance inst = gen_instance(spec);
        if (inst.planted) inst.witness = witness_from_transversal(inst.family, *inst.planted);
        if (inst.planted_real) inst.witness = witness_from_transversal(inst.family, *inst.planted_real);
        const std::string text = serialize_instance(inst);
        const Instance back = parse_instance(text);
        CHECK(serialize_instance(back) == text);
        CHECK(back.family == inst.family);
        CHECK(back.seed == inst.seed);
        CHECK(back.note == inst.note);
      }
    }
  }

  TEST_CASE("generation is deterministic in the seed") {
    InstanceSpec spec;
    spec.planted = true;
    spec.seed = 42;
    CHECK(serialize_instance(gen_instance(spec)) == serialize_instance(gen_instance(spec)));
    InstanceSpec other = spec;
    other.seed = 43;
    CHECK(serialize_instance(gen_instance(spec)) != serialize_instance(gen_instance(other)));
    CHECK(serialize_instance(gen_segments(4, SegmentLayout::concurrent, 7)) ==
          serialize_instance(gen_segments(4, SegmentLayout::concurrent, 7)));
  }

  TEST_CASE("planted transversals meet every set") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      InstanceSpec spec;
      spec.d = 1 + seed % 4;
      spec.n_sets = 1 + seed % 6;
      spec.planted = true;
      spec.seed = seed;
      const Instance c = gen_instance(spec);
      REQUIRE(c.planted);
      CHECK(std::abs(hermitian_norm(c.planted->normal) - 1.0) < 1e-12);
      CHECK(verify_transversal(*c.planted, c.family, 1e-9).pass);
      spec.ambient = Ambient::real;
      const Instance r = gen_instance(spec);
      REQUIRE(r.planted_real);
      CHECK(verify_transversal(*r.planted_real, r.family, 1e-9).pass);
    }
  }

  TEST_CASE("segment layouts") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const Instance con = gen_segments(4, SegmentLayout::concurrent, seed);
      CHECK(con.family.size() == 4);
      CHECK(con.d == 1);
      CHECK(common_point(con.family, Arithmetic::rational).exists());
    }
    const Instance uni = gen_segments(3, SegmentLayout::uniform, 1);
    for (const auto& s : uni.family) CHECK(s.polytope.size() == 2);
  }

  TEST_CASE("malformed inputs are rejected") {
    const char* bad[] = {
        "not json",
        "[]",
        R"({"d": 1, "sets": [{"label": "A", "vertices": [[[0, 0]]]}]})",
        R"({"ambient": "quaternion", "d": 1, "sets": [{"label": "A", "vertices": [[[0, 0]]]}]})",
        R"({"ambient": "complex", "d": 0, "sets": [{"label": "A", "vertices": [[[0, 0]]]}]})",
        R"({"ambient": "complex", "d": 1, "sets": []})",
        R"({"ambient": "complex", "d": 2, "sets": [{"label": "A", "vertices": [[[0, 0]]]}]})",
        R"({"ambient": "complex", "d": 1, "sets": [{"label": "A", "vertices": [[[0, 0, 1]]]}]})",
        R"({"ambient": "complex", "d": 1, "sets": [{"label": "A", "vertices": [[["x", 0]]]}]})",
        R"({"ambient": "complex", "d": 1, "sets": [{"label": "A", "vertices": [[[0, 0]]]}],
            "witness": {"k": 0, "points": [[]], "assignment": {}}})",
        R"({"ambient": "complex", "d": 1, "sets": [{"label": "A", "vertices": [[[0, 0]]]}],
            "witness": {"k": 0, "points": [[]], "assignment": {"A": 3}}})",
        R"({"ambient": "real", "d": 1, "sets": [{"label": "A", "vertices": [[0]]}], "seed": "x"})",
        R"({"ambient": "real", "d": 1, "sets": [{"label": "A", "vertices": [[0]]}]})",
    };
    for (const char* text : bad) {
      INFO(text);
      CHECK_THROWS_AS(parse_instance(text), MalformedInput);
    }
    CHECK_THROWS_AS(load_instance("/nonexistent/instance.json"), MalformedInput);
    const Instance ok = parse_instance(R"({"ambient": "real", "d": 1, "sets": [{"label": "A", "vertices": [[0]]}], "seed": 5})");
    CHECK(ok.family.size() == 1);
    CHECK_FALSE(ok.witness);
  }

  TEST_CASE("witness read off a transversal") {
    const Family f = complex_family({segment({0, 0}, {1, 0}), segment({0.5, -0.5}, {0.5, 0.5})});
    const auto trivial = witness_from_transversal(f, ComplexHyperplane::normalized({1.0}, 0.5));
    CHECK(trivial.k == 0);
    CHECK(trivial.assignment.size() == 2);

    InstanceSpec spec;
    spec.d = 3;
    spec.n_sets = 5;
    spec.vertices_per_set = 0;
    spec.planted = true;
    spec.seed = 3;
    const Instance single = gen_instance(spec);
    const auto w = witness_from_transversal(single.family, *single.planted);
    CHECK(w.k == 2);
    // Reconstruct each singleton from its coordinates in the frame of T.
    const auto& h = *single.planted;
    const auto basis = linalg::complement_basis(h.normal);
    for (std::size_t s = 0; s < single.family.size(); ++s) {
      const auto& p = w.complex_points[w.assignment.at(single.family.label(s))];
      ComplexVector z(3);
      for (std::size_t j = 0; j < 3; ++j) {
        z[j] = h.offset * h.normal[j];
        for (std::size_t b = 0; b < 2; ++b) z[j] += p[b] * basis[b][j];
      }
      const auto v = single.family.polytope(s).complex_vertex(0);
      for (std::size_t j = 0; j < 3; ++j) CHECK(std::abs(z[j] - v[j]) < 1e-9);
    }

    const Family apart = complex_family({{ComplexVector{0.0}}, {ComplexVector{1.0}}});
    CHECK_THROWS_AS(witness_from_transversal(apart, ComplexHyperplane::normalized({1.0}, 0.0)), MalformedInput);
  }
}
