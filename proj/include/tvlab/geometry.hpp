#pragma once

#include <span>
#include <vector>

#include "tvlab/polytope.hpp"
#include "tvlab/types.hpp"

namespace tvlab {

inline constexpr double kSphereNormTol = 1e-12;
inline constexpr double kPoleGuard = 1e-9;

/// Sum of u_i * conj(v_i). Conjugate-linear in the second argument.
Complex hermitian_inner(std::span<const Complex> u, std::span<const Complex> v);
double hermitian_norm(std::span<const Complex> u);

/// Appends the coordinate 1, placing z in H = {z_{d+1} = 1}.
ComplexVector embed_h(std::span<const Complex> z);

/// Unit vector of C^{d+1}.
class SpherePoint {
 public:
  /// Throws MalformedInput unless the norm is 1 within kSphereNormTol.
  explicit SpherePoint(ComplexVector coords);
  /// Rescales a nonzero vector onto the sphere.
  static SpherePoint normalized(ComplexVector coords);

  const ComplexVector& coords() const { return coords_; }
  std::size_t size() const { return coords_.size(); }
  SpherePoint operator-() const;

 private:
  ComplexVector coords_;
};

/// {z in C^d : <z, normal> = offset}, with a unit normal.
struct ComplexHyperplane {
  ComplexVector normal;
  Complex offset;

  /// Normalizes (normal, offset) jointly; throws MalformedInput on a zero normal.
  static ComplexHyperplane normalized(ComplexVector normal, Complex offset);

  std::size_t dim() const { return normal.size(); }
  /// |<z, normal> - offset|, the Euclidean distance from z to the hyperplane.
  double distance(std::span<const Complex> z) const;
};

/// Image of a polytope under Hermitian projection onto the complex line
/// through `direction`: the convex hull of the listed coefficients in C = R^2.
struct ProjectedPolygon {
  ComplexVector direction;
  std::vector<Complex> vertices;
};

/// Coefficients c_v = <v, x> for every vertex v of F.
ProjectedPolygon project_polytope(const SpherePoint& x, const Polytope& polytope);
/// Same projection along an arbitrary (not necessarily unit) direction.
ProjectedPolygon project_along(std::span<const Complex> direction, const Polytope& polytope);

/// The point of the polygon nearest to 0.
Complex closest_coeff(const ProjectedPolygon& polygon);

/// Euclidean distance from `point` to the polygon (0 inside).
double distance_to_polygon(const ProjectedPolygon& polygon, Complex point);

/// The hyperplane T of C^d whose embedding into H is Hermitian-orthogonal to x0.
/// Throws PoleError when the first d coordinates have norm below kPoleGuard.
ComplexHyperplane hyperplane_from_sphere_point(const SpherePoint& x0);

namespace planar {

double cross(Complex a, Complex b);
double dot(Complex a, Complex b);

/// Counter-clockwise convex hull with collinear points removed. A degenerate
/// input yields one point or the two extreme points of a segment.
std::vector<Complex> convex_hull(std::span<const Complex> points);

/// Nearest point of the hull polygon to `target`. Edges are evaluated from
/// their midpoint so that negating every input negates the result exactly.
Complex closest_point(std::span<const Complex> hull, Complex target = {0.0, 0.0});

/// Half-plane description n . c <= h with unit outward normals. Segments and
/// points get end caps so that the description stays bounded.
struct HalfPlane {
  Complex normal;
  double offset;
};
std::vector<HalfPlane> half_planes(std::span<const Complex> hull);

}  // namespace planar

}  // namespace tvlab
