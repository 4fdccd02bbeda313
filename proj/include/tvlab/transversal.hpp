#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "tvlab/consistency.hpp"
#include "tvlab/geometry.hpp"
#include "tvlab/polytope.hpp"

namespace tvlab {

/// {p : normal . p = offset}, unit normal.
struct RealHyperplane {
  RealVector normal;
  double offset = 0.0;
};

struct SearchConfig {
  std::size_t starts = 32;
  std::size_t iterations = 2000;
  double step_decay = 0.7;
  double initial_step = 0.5;
  std::uint64_t seed = 0;
  /// Acceptance threshold on stabbing / polygon margins.
  double margin_tol = 1e-9;
  /// Angular samples over a half circle for the planar real search; the 3-D
  /// grid uses grid/10 polar by grid/5 azimuthal samples.
  std::size_t grid = 3600;
  /// Borsuk search: residual that counts as a zero, and the post-hoc
  /// verification tolerance of the recovered hyperplane.
  double zero_tol = 1e-6;
  double verify_tol = 1e-4;
  /// Residual the zero search keeps refining toward after reaching zero_tol.
  double polish_tol = 1e-10;
  /// Worker threads for independent starts; results do not depend on it.
  std::size_t threads = 1;
};

// ---- real hyperplanes -------------------------------------------------------

/// min_F max_v u.v - max_F min_v u.v; nonnegative iff some hyperplane with
/// normal u meets every set.
double stabbing_margin(const Family& family, const RealVector& u);

struct RealSearchResult {
  std::optional<RealHyperplane> hyperplane;
  double best_margin = 0.0;
  RealVector best_normal;
  /// The search covered every direction at `grid_resolution` (d <= 2).
  bool exhaustive = false;
  std::size_t grid_resolution = 0;
};

RealSearchResult real_hyperplane_transversal(const Family& family, const SearchConfig& config = {});

// ---- complex hyperplanes by projected polygons -----------------------------

/// A common offset b with {<z, a> = b} meeting every set, if one exists.
std::optional<Complex> complex_transversal_for_normal(const ComplexVector& normal, const Family& family);

struct PolygonMargin {
  double margin = 0.0;
  Complex center;
};

/// Largest eps for which the eps-shrunk projected polygons along `normal`
/// still share a point (negative when they do not intersect).
PolygonMargin polygon_margin(const ComplexVector& normal, const Family& family);

struct ComplexSearchResult {
  std::optional<ComplexHyperplane> hyperplane;
  double best_margin = 0.0;
  ComplexVector best_normal;
  std::size_t evaluations = 0;
};

ComplexSearchResult find_complex_transversal(const Family& family, const SearchConfig& config = {});

// ---- the odd map on the sphere ----------------------------------------------

/// f(x) = sum_F (p_{x,F}, conj(p_{x,F}) phi(F)) in C x C^{d-1}.
struct BorsukEvaluation {
  SpherePoint x;
  Complex head;
  ComplexVector tail;
  ComplexVector coefficients;

  double norm() const;
  /// The value read as a vector of R^{2d}.
  RealVector as_real() const;
};

/// `family` must already live in H (dimension d+1, last coordinate 1) and
/// the witness must map into C^{d-1}.
BorsukEvaluation borsuk_map(const SpherePoint& x, const Family& family, const ConsistencyWitness& witness);

struct DescentResult {
  SpherePoint x;
  double residual = 0.0;
  std::size_t evaluations = 0;
};

/// Compass search for a zero of f from one start on the sphere. The search
/// is odd-equivariant: starting at -x retraces the same path negated.
DescentResult borsuk_descent(const SpherePoint& start, const Family& family, const ConsistencyWitness& witness,
                             const SearchConfig& config = {});

struct BorsukSearchResult {
  std::optional<SpherePoint> zero;
  std::optional<ComplexHyperplane> hyperplane;
  double residual = 0.0;
  std::size_t starts_used = 0;
  std::size_t pole_rejections = 0;
  /// A zero whose hyperplane failed verification leaves the dependence
  /// (conj p_{x0,F} over the sets with |p| > 1e-6) for re-checking.
  std::optional<AffineDependence> angle_certificate;
  bool found() const { return hyperplane.has_value(); }
};

BorsukSearchResult find_borsuk_zero(const Family& family, const ConsistencyWitness& witness,
                                    const SearchConfig& config = {});

// ---- verification -------------------------------------------------------------

struct TransversalReport {
  std::vector<double> distances;
  double max_distance = 0.0;
  bool pass = false;
};

/// Per set, the distance between the hyperplane and the set (measured in the
/// polygon projected along the normal).
TransversalReport verify_transversal(const ComplexHyperplane& hyperplane, const Family& family, double tol);
TransversalReport verify_transversal(const RealHyperplane& hyperplane, const Family& family, double tol);

}  // namespace tvlab
