#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tvlab/lp.hpp"
#include "tvlab/polytope.hpp"

namespace tvlab {

/// A point set P in R^k or C^k together with the assignment phi: label -> P.
struct ConsistencyWitness {
  Ambient ambient = Ambient::complex;
  std::size_t k = 0;
  std::vector<ComplexVector> complex_points;
  std::vector<RealVector> real_points;
  std::map<std::string, std::size_t> assignment;

  std::size_t num_points() const {
    return ambient == Ambient::complex ? complex_points.size() : real_points.size();
  }
  /// phi of every family member, in family order. Throws MalformedInput when a
  /// label is unassigned, an index is out of range or a point has the wrong size.
  std::vector<ComplexVector> complex_images(const Family& family) const;
  std::vector<RealVector> real_images(const Family& family) const;

  /// Every label mapped to the single point of C^0.
  static ConsistencyWitness trivial(const Family& family);
};

/// Coefficients a_F over a subfamily (family indices, increasing) with
/// sum a_F = 0 and sum a_F phi(F) = 0.
struct AffineDependence {
  std::vector<std::size_t> support;
  ComplexVector coefficients;

  /// max(|sum a|, |sum a phi|_inf) against the given images (family order).
  double residual(const std::vector<ComplexVector>& images) const;
};

/// r_F >= 0 and p_F in F realizing sum r_F a_F = 0 and sum (r_F a_F) p_F = 0.
struct Lift {
  std::vector<std::size_t> support;
  RealVector r;
  std::vector<ComplexVector> points;
  ComplexVector products;
  /// Vertex weights certifying p_F as a convex combination (per support entry).
  std::vector<RealVector> vertex_weights;

  double residual() const;
};

struct LiftOutcome {
  std::optional<Lift> lift;
  FeasibilityCertificate certificate;
  bool lifted() const { return lift.has_value(); }
};

struct ConsistencyConfig {
  /// Directions drawn per subfamily whose dependence space has dimension >= 2.
  std::size_t samples = 64;
  std::uint64_t seed = 0;
  /// Residual tolerance for dependences and lifts.
  double tol = 1e-9;
  /// Confirm every NoLift with the rational simplex before reporting a failure.
  bool exact = true;
};

struct SubfamilyPair {
  std::vector<std::size_t> first;
  std::vector<std::size_t> second;
};

struct ConsistencyVerdict {
  bool pass = true;
  std::optional<AffineDependence> violation;
  std::optional<SubfamilyPair> violating_pair;
  /// The failing dependence's NoLift was re-derived in rational arithmetic.
  bool exact_confirmed = false;
  std::size_t dependences_checked = 0;
  std::size_t samples = 0;
};

/// Largest support size that needs checking: 2k + 3.
std::size_t max_support(std::size_t k);

/// Streams the dependences of every subfamily of size 2..min(n, 2k+3) in
/// order of increasing size, lexicographically. Nullity-1 subfamilies give
/// their unique dependence; larger null spaces give `config.samples` seeded
/// uniformly random unit directions. Dependences are normalized to unit norm
/// with their largest coefficient real positive, and exact repeats are dropped.
/// The visitor returns false to stop.
void for_each_dependence(const Family& family, const ConsistencyWitness& witness,
                         const ConsistencyConfig& config,
                         const std::function<bool(const AffineDependence&)>& visit);

std::vector<AffineDependence> enumerate_dependences(const Family& family, const ConsistencyWitness& witness,
                                                    const ConsistencyConfig& config);

/// Decides whether a dependence lifts into the sets via the cone
/// sum lambda_{F,v} (a_F v, a_F) = 0, sum lambda = 1, lambda >= 0.
LiftOutcome lift_dependence(const Family& family, const AffineDependence& dependence,
                            Arithmetic arithmetic = Arithmetic::floating);

ConsistencyVerdict check_dependency_consistency(const Family& family, const ConsistencyWitness& witness,
                                                const ConsistencyConfig& config = {});

/// Real-path check over subfamily pairs with |F1| + |F2| <= k + 2.
ConsistencyVerdict separates_consistently(const Family& family, const ConsistencyWitness& witness,
                                          Arithmetic arithmetic = Arithmetic::floating);

struct ReducedDependence {
  AffineDependence dependence;
  /// Positive multipliers s_i with dependence.coefficients[i] = s_i * original a.
  RealVector scales;
};

/// Caratheodory reduction: rewrites a dependence as one supported on at most
/// 2k + 3 of its labels using positive rescalings of the original coefficients.
ReducedDependence reduce_support(const AffineDependence& dependence, const std::vector<ComplexVector>& images,
                                 std::size_t k);

}  // namespace tvlab
