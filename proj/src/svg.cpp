#include "tvlab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "tvlab/lp.hpp"

namespace tvlab {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                    "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v == 0.0 ? 0.0 : v);
  return buf;
}

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

// Maps a data box onto a square panel with the y axis pointing up.
class Frame {
 public:
  Frame(double left, double top, double size, double lo_x, double hi_x, double lo_y, double hi_y)
      : left_(left), top_(top), size_(size) {
    const double span = std::max({hi_x - lo_x, hi_y - lo_y, 1e-9});
    scale_ = (size - 2 * kMargin) / span;
    cx_ = 0.5 * (lo_x + hi_x);
    cy_ = 0.5 * (lo_y + hi_y);
  }

  Point2 map(Point2 p) const {
    return {left_ + 0.5 * size_ + (p.x - cx_) * scale_, top_ + 0.5 * size_ - (p.y - cy_) * scale_};
  }
  double scale() const { return scale_; }

 private:
  static constexpr double kMargin = 24.0;
  double left_, top_, size_, scale_ = 1.0, cx_ = 0.0, cy_ = 0.0;
};

struct Bounds {
  double lo_x = 1e300, hi_x = -1e300, lo_y = 1e300, hi_y = -1e300;
  void add(Point2 p) {
    lo_x = std::min(lo_x, p.x);
    hi_x = std::max(hi_x, p.x);
    lo_y = std::min(lo_y, p.y);
    hi_y = std::max(hi_y, p.y);
  }
  bool empty() const { return lo_x > hi_x; }
};

std::vector<Point2> hull_points(const std::vector<Point2>& pts) {
  std::vector<Complex> zs;
  zs.reserve(pts.size());
  for (const auto& p : pts) zs.emplace_back(p.x, p.y);
  std::vector<Point2> out;
  for (const auto& z : planar::convex_hull(zs)) out.push_back({z.real(), z.imag()});
  return out;
}

void polygon(std::ostringstream& os, const Frame& f, const std::vector<Point2>& hull, const char* color,
             const char* extra = "") {
  if (hull.size() == 1) {
    const Point2 q = f.map(hull[0]);
    os << "<circle cx=\"" << fmt(q.x) << "\" cy=\"" << fmt(q.y) << "\" r=\"3\" fill=\"" << color << "\"" << extra
       << "/>\n";
    return;
  }
  os << (hull.size() == 2 ? "<polyline" : "<polygon") << " points=\"";
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const Point2 q = f.map(hull[i]);
    os << (i ? " " : "") << fmt(q.x) << "," << fmt(q.y);
  }
  os << "\" fill=\"" << (hull.size() == 2 ? "none" : color) << "\" fill-opacity=\"0.25\" stroke=\"" << color
     << "\" stroke-width=\"1.5\"" << extra << "/>\n";
}

void segment(std::ostringstream& os, const Frame& f, Point2 a, Point2 b, const char* color, const char* extra = "") {
  const Point2 p = f.map(a);
  const Point2 q = f.map(b);
  os << "<line x1=\"" << fmt(p.x) << "\" y1=\"" << fmt(p.y) << "\" x2=\"" << fmt(q.x) << "\" y2=\"" << fmt(q.y)
     << "\" stroke=\"" << color << "\" stroke-width=\"1.5\"" << extra << "/>\n";
}

void marker(std::ostringstream& os, const Frame& f, Point2 a, const char* color, const std::string& title) {
  const Point2 p = f.map(a);
  os << "<circle cx=\"" << fmt(p.x) << "\" cy=\"" << fmt(p.y) << "\" r=\"4\" fill=\"" << color
     << "\" stroke=\"black\"><title>" << title << "</title></circle>\n";
}

void label(std::ostringstream& os, double x, double y, const std::string& text) {
  os << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" font-family=\"monospace\" font-size=\"12\">" << text
     << "</text>\n";
}

Point2 pick(std::span<const double> coords, const std::array<std::size_t, 2>& axes) {
  return {coords[axes[0]], coords[axes[1]]};
}

std::array<std::size_t, 2> plane_axes(const Instance& inst, const PlotOptions& options) {
  if (options.axes) {
    const std::size_t n = inst.family.polytope(0).real_dim();
    if ((*options.axes)[0] >= n || (*options.axes)[1] >= n || (*options.axes)[0] == (*options.axes)[1]) {
      throw MalformedInput("plot axes out of range");
    }
    return *options.axes;
  }
  if (inst.ambient == Ambient::complex && inst.d == 1) return {0, 1};
  if (inst.ambient == Ambient::real && inst.d == 2) return {0, 1};
  throw MalformedInput("plotting this dimension needs a choice of two axes");
}

// Points of F ∩ T, one per set that T meets.
std::vector<std::vector<double>> transversal_trace(const Instance& inst, const ComplexHyperplane& t) {
  std::vector<std::vector<double>> out;
  const ComplexEquation eq{t.normal, t.offset};
  for (const auto& s : inst.family) {
    const FlatMeeting m = flat_meets_polytope(std::span<const ComplexEquation>(&eq, 1), s.polytope);
    if (!m.point) continue;
    std::vector<double> coords;
    for (const Complex& c : *m.point) {
      coords.push_back(c.real());
      coords.push_back(c.imag());
    }
    out.push_back(std::move(coords));
  }
  return out;
}

void instance_panel(std::ostringstream& os, const Instance& inst, const PlotOptions& options, double left) {
  const auto axes = plane_axes(inst, options);
  std::vector<std::vector<Point2>> hulls;
  Bounds box;
  for (const auto& s : inst.family) {
    std::vector<Point2> pts;
    for (std::size_t i = 0; i < s.polytope.size(); ++i) pts.push_back(pick(s.polytope.real_vertex(i), axes));
    for (const auto& p : pts) box.add(p);
    hulls.push_back(hull_points(pts));
  }

  std::optional<ComplexHyperplane> t = options.transversal ? options.transversal : inst.planted;
  std::vector<Point2> trace;
  if (t && inst.ambient == Ambient::complex) {
    if (inst.d == 1) {
      const ComplexHyperplane h = ComplexHyperplane::normalized(t->normal, t->offset);
      const Complex z = h.offset * h.normal[0];
      trace.push_back({z.real(), z.imag()});
    } else {
      for (const auto& c : transversal_trace(inst, *t)) trace.push_back(pick(c, axes));
    }
  }
  for (const auto& p : trace) box.add(p);

  const Frame f(left, 0.0, options.size, box.lo_x, box.hi_x, box.lo_y, box.hi_y);
  os << "<g id=\"instance\">\n";
  label(os, left + 8, 16, "d=" + std::to_string(inst.d) + " sets=" + std::to_string(inst.family.size()) +
                              " axes=" + std::to_string(axes[0]) + "," + std::to_string(axes[1]));
  for (std::size_t i = 0; i < hulls.size(); ++i) {
    const char* color = kPalette[i % std::size(kPalette)];
    std::string extra = " data-label=\"" + inst.family.label(i) + "\"";
    polygon(os, f, hulls[i], color, extra.c_str());
  }
  if (inst.ambient == Ambient::real && inst.planted_real && inst.d == 2) {
    const auto& h = *inst.planted_real;
    const Point2 base{h.offset * h.normal[0], h.offset * h.normal[1]};
    const Point2 dir{-h.normal[1], h.normal[0]};
    const double reach = 4.0;
    segment(os, f, {base.x - reach * dir.x, base.y - reach * dir.y}, {base.x + reach * dir.x, base.y + reach * dir.y},
            "black", " stroke-dasharray=\"4 3\"");
  }
  for (const auto& p : trace) marker(os, f, p, "black", "transversal");
  os << "</g>\n";
}

void projection_panel(std::ostringstream& os, const Instance& inst, const PlotOptions& options, double left) {
  if (inst.ambient != Ambient::complex) throw MalformedInput("the projection panel needs a complex instance");
  if (options.panel_set >= inst.family.size()) throw MalformedInput("panel set out of range");
  const SpherePoint& x = *options.panel_direction;
  if (x.size() != inst.d + 1) throw MalformedInput("panel direction must lie in C^{d+1}");
  const Family lifted = embed_family(inst.family);
  const ProjectedPolygon poly = project_polytope(x, lifted.polytope(options.panel_set));
  const auto hull = planar::convex_hull(poly.vertices);
  const Complex p = planar::closest_point(hull);

  // The vertex farthest along p shows the half-plane Re(conj(p) c) >= |p|^2.
  std::size_t far = 0;
  for (std::size_t i = 1; i < hull.size(); ++i) {
    if (planar::dot(p, hull[i]) > planar::dot(p, hull[far])) far = i;
  }
  const Complex c = hull[far];

  Bounds box;
  box.add({0.0, 0.0});
  std::vector<Point2> pts;
  for (const auto& z : hull) {
    pts.push_back({z.real(), z.imag()});
    box.add(pts.back());
  }
  const Frame f(left, 0.0, options.size, box.lo_x, box.hi_x, box.lo_y, box.hi_y);
  os << "<g id=\"projection\">\n";
  label(os, left + 8, 16, "projection of " + inst.family.label(options.panel_set));
  polygon(os, f, pts, "#1f77b4");
  marker(os, f, {0.0, 0.0}, "white", "origin");
  const double np = std::abs(p);
  if (np > 0.0) {
    // Boundary line {w : Re(conj(p) w) = |p|^2} through p, orthogonal to p.
    const Point2 dir{-p.imag() / np, p.real() / np};
    const double reach = 4.0 * std::max({box.hi_x - box.lo_x, box.hi_y - box.lo_y, 1.0});
    segment(os, f, {p.real() - reach * dir.x, p.imag() - reach * dir.y},
            {p.real() + reach * dir.x, p.imag() + reach * dir.y}, "#7f7f7f", " stroke-dasharray=\"4 3\"");
  }
  segment(os, f, {0.0, 0.0}, {c.real(), c.imag()}, "#2ca02c");
  segment(os, f, {0.0, 0.0}, {p.real(), p.imag()}, "#d62728");
  marker(os, f, {p.real(), p.imag()}, "#d62728", "closest point");
  marker(os, f, {c.real(), c.imag()}, "#2ca02c", "projected vertex");
  os << "</g>\n";
}

}  // namespace

std::string plot_instance(const Instance& instance, const PlotOptions& options) {
  const bool panel = options.panel_direction.has_value();
  const double width = options.size * (panel ? 2.0 : 1.0);
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width) << "\" height=\"" << fmt(options.size)
     << "\" viewBox=\"0 0 " << fmt(width) << " " << fmt(options.size) << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  instance_panel(os, instance, options, 0.0);
  if (panel) projection_panel(os, instance, options, options.size);
  os << "</svg>\n";
  return os.str();
}

}  // namespace tvlab
