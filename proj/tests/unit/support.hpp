#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "tvlab/geometry.hpp"
#include "tvlab/polytope.hpp"
#include "tvlab/random.hpp"

namespace tvlab::test {

inline Complex box_complex(Rng& rng, double r = 1.0) { return {rng.uniform(-r, r), rng.uniform(-r, r)}; }

inline ComplexVector box_vector(Rng& rng, std::size_t d, double r = 1.0) {
  ComplexVector v(d);
  for (auto& c : v) c = box_complex(rng, r);
  return v;
}

inline SpherePoint random_sphere(Rng& rng, std::size_t n) {
  ComplexVector v(n);
  for (auto& c : v) c = rng.complex_normal();
  return SpherePoint::normalized(std::move(v));
}

inline Polytope random_complex_polytope(Rng& rng, std::size_t d, std::size_t verts, double r = 1.0) {
  std::vector<ComplexVector> vs;
  for (std::size_t i = 0; i < verts; ++i) vs.push_back(box_vector(rng, d, r));
  return Polytope::from_complex(vs);
}

inline Family random_complex_family(Rng& rng, std::size_t d, std::size_t sets, std::size_t verts) {
  std::vector<LabeledSet> out;
  for (std::size_t s = 0; s < sets; ++s) {
    out.push_back({"F" + std::to_string(s), random_complex_polytope(rng, d, 1 + rng.index(verts))});
  }
  return Family(std::move(out));
}

inline Family complex_family(const std::vector<std::vector<ComplexVector>>& sets) {
  std::vector<LabeledSet> out;
  for (std::size_t s = 0; s < sets.size(); ++s) out.push_back({"F" + std::to_string(s), Polytope::from_complex(sets[s])});
  return Family(std::move(out));
}

inline Family real_family(const std::vector<std::vector<RealVector>>& sets) {
  std::vector<LabeledSet> out;
  for (std::size_t s = 0; s < sets.size(); ++s) out.push_back({"F" + std::to_string(s), Polytope::from_real(sets[s])});
  return Family(std::move(out));
}

/// Segment in C^1 from a to b.
inline std::vector<ComplexVector> segment(Complex a, Complex b) { return {ComplexVector{a}, ComplexVector{b}}; }

inline double dist(Complex a, Complex b) { return std::abs(a - b); }

}  // namespace tvlab::test
