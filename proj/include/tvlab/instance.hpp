#pragma once

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>

#include "tvlab/consistency.hpp"
#include "tvlab/geometry.hpp"
#include "tvlab/polytope.hpp"
#include "tvlab/transversal.hpp"

namespace tvlab {

/// A family plus everything known about it: witness, planted transversal and
/// the seed it was generated from.
struct Instance {
  Ambient ambient = Ambient::complex;
  std::size_t d = 0;
  Family family;
  std::optional<ConsistencyWitness> witness;
  std::optional<ComplexHyperplane> planted;
  std::optional<RealHyperplane> planted_real;
  std::uint64_t seed = 0;
  std::string note;
};

struct InstanceSpec {
  std::size_t d = 2;
  std::size_t n_sets = 3;
  std::size_t vertices_per_set = 4;
  bool planted = false;
  std::uint64_t seed = 0;
  Ambient ambient = Ambient::complex;
};

/// Random vertex polytopes with coordinates in [-1, 1] (real and imaginary
/// parts separately for complex instances). A planted instance draws a
/// hyperplane T first and appends one point of T to every set.
Instance gen_instance(const InstanceSpec& spec);

/// Segment families in C^1 for the one-dimensional experiments. `concurrent`
/// runs every segment through one random point; `near_miss` then pushes one
/// segment off that point, so the sets typically meet pairwise but share no
/// point; `uniform` draws all endpoints from the box.
enum class SegmentLayout { uniform, concurrent, near_miss };

std::string to_string(SegmentLayout layout);
Instance gen_segments(std::size_t n_sets, SegmentLayout layout, std::uint64_t seed);

/// Coordinates of one point of F ∩ T per set, in an affine frame of T whose
/// origin is the point of T nearest 0. Throws MalformedInput if T misses a set
/// by more than `tol`.
ConsistencyWitness witness_from_transversal(const Family& family, const ComplexHyperplane& hyperplane,
                                            double tol = 1e-9);
ConsistencyWitness witness_from_transversal(const Family& family, const RealHyperplane& hyperplane,
                                            double tol = 1e-9);

nlohmann::json complex_to_json(Complex c);
Complex complex_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ComplexHyperplane& h);
nlohmann::json to_json(const RealHyperplane& h);
ComplexHyperplane complex_hyperplane_from_json(const nlohmann::json& j);
RealHyperplane real_hyperplane_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ConsistencyWitness& w);
ConsistencyWitness witness_from_json(const nlohmann::json& j, Ambient ambient);

nlohmann::json to_json(const Instance& instance);
/// Throws MalformedInput on schema violations.
Instance instance_from_json(const nlohmann::json& j);

std::string serialize_instance(const Instance& instance);
Instance parse_instance(const std::string& text);
Instance load_instance(const std::string& path);
void save_text(const std::string& path, const std::string& text);

}  // namespace tvlab
