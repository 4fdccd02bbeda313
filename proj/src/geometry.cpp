#include "tvlab/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "tvlab/kernels.hpp"

namespace tvlab {

Complex hermitian_inner(std::span<const Complex> u, std::span<const Complex> v) {
  require_same_dim(u.size(), v.size(), "hermitian_inner");
  Complex s{0.0, 0.0};
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * std::conj(v[i]);
  return s;
}

double hermitian_norm(std::span<const Complex> u) {
  double s = 0.0;
  for (const Complex& c : u) s += std::norm(c);
  return std::sqrt(s);
}

ComplexVector embed_h(std::span<const Complex> z) {
  ComplexVector out(z.begin(), z.end());
  out.emplace_back(1.0, 0.0);
  return out;
}

SpherePoint::SpherePoint(ComplexVector coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw MalformedInput("sphere point needs at least one coordinate");
  if (std::abs(hermitian_norm(coords_) - 1.0) > kSphereNormTol) {
    throw MalformedInput("sphere point is not a unit vector");
  }
}

SpherePoint SpherePoint::normalized(ComplexVector coords) {
  const double n = hermitian_norm(coords);
  if (!(n > 0.0) || !std::isfinite(n)) throw MalformedInput("cannot normalize a zero vector");
  for (auto& c : coords) c /= n;
  return SpherePoint(std::move(coords));
}

SpherePoint SpherePoint::operator-() const {
  ComplexVector neg(coords_.size());
  std::transform(coords_.begin(), coords_.end(), neg.begin(), [](Complex c) { return -c; });
  return SpherePoint(std::move(neg));
}

ComplexHyperplane ComplexHyperplane::normalized(ComplexVector normal, Complex offset) {
  const double n = hermitian_norm(normal);
  if (!(n > 0.0) || !std::isfinite(n)) throw MalformedInput("hyperplane normal is zero");
  for (auto& c : normal) c /= n;
  return {std::move(normal), offset / n};
}

double ComplexHyperplane::distance(std::span<const Complex> z) const {
  return std::abs(hermitian_inner(z, normal) - offset);
}

ProjectedPolygon project_along(std::span<const Complex> direction, const Polytope& polytope) {
  if (!polytope.is_complex()) throw MalformedInput("projection onto a complex line needs a complex polytope");
  require_same_dim(polytope.dim(), direction.size(), "project_polytope");
  ProjectedPolygon out;
  out.direction.assign(direction.begin(), direction.end());
  out.vertices.resize(polytope.size());
  kernels::project_coefficients(polytope.data(), direction, out.vertices);
  return out;
}

ProjectedPolygon project_polytope(const SpherePoint& x, const Polytope& polytope) {
  return project_along(x.coords(), polytope);
}

Complex closest_coeff(const ProjectedPolygon& polygon) {
  if (polygon.vertices.empty()) throw MalformedInput("empty projected polygon");
  const auto hull = planar::convex_hull(polygon.vertices);
  return planar::closest_point(hull);
}

double distance_to_polygon(const ProjectedPolygon& polygon, Complex point) {
  if (polygon.vertices.empty()) throw MalformedInput("empty projected polygon");
  const auto hull = planar::convex_hull(polygon.vertices);
  return std::abs(planar::closest_point(hull, point) - point);
}

ComplexHyperplane hyperplane_from_sphere_point(const SpherePoint& x0) {
  const auto& x = x0.coords();
  if (x.size() < 2) throw DimensionError("sphere point must live in C^{d+1} with d >= 1");
  const std::size_t d = x.size() - 1;
  const double n = hermitian_norm(std::span<const Complex>(x).first(d));
  if (n < kPoleGuard) {
    throw PoleError("sphere point is at the pole (0,...,0,z); its complement is parallel to H");
  }
  ComplexVector normal(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(d));
  for (auto& c : normal) c /= n;
  return {std::move(normal), -std::conj(x[d]) / n};
}

namespace planar {

double cross(Complex a, Complex b) { return a.real() * b.imag() - a.imag() * b.real(); }
double dot(Complex a, Complex b) { return a.real() * b.real() + a.imag() * b.imag(); }

std::vector<Complex> convex_hull(std::span<const Complex> points) {
  std::vector<Complex> pts(points.begin(), points.end());
  auto less = [](Complex a, Complex b) {
    return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
  };
  std::sort(pts.begin(), pts.end(), less);
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() <= 2) return pts;

  std::vector<Complex> hull(2 * pts.size());
  std::size_t k = 0;
  for (const Complex& p : pts) {
    while (k >= 2 && cross(hull[k - 1] - hull[k - 2], p - hull[k - 2]) <= 0.0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

namespace {

Complex closest_on_segment(Complex a, Complex b) {
  const Complex mid = (a + b) * 0.5;
  const Complex half = (b - a) * 0.5;
  const double hh = dot(half, half);
  if (hh == 0.0) return a;
  const double t = -dot(mid, half) / hh;
  if (t <= -1.0) return a;
  if (t >= 1.0) return b;
  return mid + t * half;
}

}  // namespace

Complex closest_point(std::span<const Complex> hull, Complex target) {
  if (hull.empty()) throw MalformedInput("closest point of an empty polygon");
  if (hull.size() == 1) return hull[0];

  std::vector<Complex> q(hull.size());
  std::transform(hull.begin(), hull.end(), q.begin(), [&](Complex c) { return c - target; });

  if (q.size() >= 3) {
    bool inside = true;
    for (std::size_t i = 0; i < q.size() && inside; ++i) {
      inside = cross(q[i], q[(i + 1) % q.size()]) >= 0.0;
    }
    if (inside) return target;
  }

  const std::size_t edges = q.size() == 2 ? 1 : q.size();
  Complex best = q[0];
  double best_d = std::norm(best);
  for (std::size_t i = 0; i < edges; ++i) {
    const Complex c = closest_on_segment(q[i], q[(i + 1) % q.size()]);
    const double dd = std::norm(c);
    if (dd < best_d) {
      best_d = dd;
      best = c;
    }
  }
  return best + target;
}

std::vector<HalfPlane> half_planes(std::span<const Complex> hull) {
  std::vector<HalfPlane> out;
  if (hull.empty()) return out;
  if (hull.size() == 1) {
    const Complex p = hull[0];
    out.push_back({{1.0, 0.0}, p.real()});
    out.push_back({{-1.0, 0.0}, -p.real()});
    out.push_back({{0.0, 1.0}, p.imag()});
    out.push_back({{0.0, -1.0}, -p.imag()});
    return out;
  }
  if (hull.size() == 2) {
    const Complex a = hull[0];
    const Complex b = hull[1];
    const Complex e = (b - a) / std::abs(b - a);
    const Complex n{e.imag(), -e.real()};
    out.push_back({n, dot(n, a)});
    out.push_back({-n, -dot(n, a)});
    out.push_back({e, dot(e, b)});
    out.push_back({-e, -dot(e, a)});
    return out;
  }
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const Complex a = hull[i];
    const Complex b = hull[(i + 1) % hull.size()];
    const Complex e = (b - a) / std::abs(b - a);
    const Complex n{e.imag(), -e.real()};
    out.push_back({n, dot(n, a)});
  }
  return out;
}

}  // namespace planar

}  // namespace tvlab
