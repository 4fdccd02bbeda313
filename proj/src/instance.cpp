#include "tvlab/instance.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "tvlab/json_writer.hpp"
#include "tvlab/linalg.hpp"
#include "tvlab/lp.hpp"
#include "tvlab/random.hpp"

namespace tvlab {

using nlohmann::json;

namespace {

ComplexVector random_unit_complex(Rng& rng, std::size_t d) {
  for (;;) {
    ComplexVector a(d);
    for (auto& c : a) c = rng.complex_normal();
    const double n = hermitian_norm(a);
    if (n < 1e-12) continue;
    for (auto& c : a) c /= n;
    return a;
  }
}

RealVector random_unit_real(Rng& rng, std::size_t d) {
  for (;;) {
    RealVector a(d);
    double s = 0.0;
    for (auto& c : a) {
      c = rng.normal();
      s += c * c;
    }
    const double n = std::sqrt(s);
    if (n < 1e-12) continue;
    for (auto& c : a) c /= n;
    return a;
  }
}

double real_dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Instance gen_complex(const InstanceSpec& spec, Rng& rng) {
  Instance inst;
  inst.ambient = Ambient::complex;
  inst.d = spec.d;
  inst.seed = spec.seed;
  if (spec.planted) {
    ComplexHyperplane t{random_unit_complex(rng, spec.d), {rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)}};
    inst.planted = t;
  }
  std::vector<LabeledSet> sets;
  for (std::size_t s = 0; s < spec.n_sets; ++s) {
    std::vector<ComplexVector> verts(spec.vertices_per_set, ComplexVector(spec.d));
    for (auto& v : verts) {
      for (auto& c : v) c = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    }
    if (inst.planted) {
      const auto& t = *inst.planted;
      ComplexVector z(spec.d);
      for (auto& c : z) c = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
      const Complex shift = t.offset - hermitian_inner(z, t.normal);
      for (std::size_t j = 0; j < spec.d; ++j) z[j] += shift * t.normal[j];
      verts.push_back(std::move(z));
    }
    sets.push_back({"F" + std::to_string(s), Polytope::from_complex(verts)});
  }
  inst.family = Family(std::move(sets));
  return inst;
}

Instance gen_real(const InstanceSpec& spec, Rng& rng) {
  Instance inst;
  inst.ambient = Ambient::real;
  inst.d = spec.d;
  inst.seed = spec.seed;
  if (spec.planted) inst.planted_real = RealHyperplane{random_unit_real(rng, spec.d), rng.uniform(-0.5, 0.5)};
  std::vector<LabeledSet> sets;
  for (std::size_t s = 0; s < spec.n_sets; ++s) {
    std::vector<RealVector> verts(spec.vertices_per_set, RealVector(spec.d));
    for (auto& v : verts) {
      for (auto& c : v) c = rng.uniform(-1.0, 1.0);
    }
    if (inst.planted_real) {
      const auto& t = *inst.planted_real;
      RealVector z(spec.d);
      for (auto& c : z) c = rng.uniform(-1.0, 1.0);
      const double shift = t.offset - real_dot(z, t.normal);
      for (std::size_t j = 0; j < spec.d; ++j) z[j] += shift * t.normal[j];
      verts.push_back(std::move(z));
    }
    sets.push_back({"F" + std::to_string(s), Polytope::from_real(verts)});
  }
  inst.family = Family(std::move(sets));
  return inst;
}

const json& field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw MalformedInput(std::string("missing field '") + key + "'");
  return *it;
}

double number(const json& j) {
  if (!j.is_number()) throw MalformedInput("expected a number");
  return j.get<double>();
}

RealVector real_vector_from_json(const json& j) {
  if (!j.is_array()) throw MalformedInput("expected an array of numbers");
  RealVector v;
  v.reserve(j.size());
  for (const auto& x : j) v.push_back(number(x));
  return v;
}

ComplexVector complex_vector_from_json(const json& j) {
  if (!j.is_array()) throw MalformedInput("expected an array of [re, im] pairs");
  ComplexVector v;
  v.reserve(j.size());
  for (const auto& x : j) v.push_back(complex_from_json(x));
  return v;
}

json real_vector_to_json(std::span<const double> v) {
  json out = json::array();
  for (double x : v) out.push_back(x);
  return out;
}

json complex_vector_to_json(std::span<const Complex> v) {
  json out = json::array();
  for (const Complex& c : v) out.push_back(complex_to_json(c));
  return out;
}

}  // namespace

Instance gen_instance(const InstanceSpec& spec) {
  if (spec.d < 1) throw MalformedInput("gen_instance: d must be at least 1");
  if (spec.n_sets < 1) throw MalformedInput("gen_instance: at least one set is required");
  if (spec.vertices_per_set < 1 && !spec.planted) {
    throw MalformedInput("gen_instance: sets need at least one vertex");
  }
  Rng rng(spec.seed);
  Instance inst = spec.ambient == Ambient::complex ? gen_complex(spec, rng) : gen_real(spec, rng);
  inst.note = std::string(spec.planted ? "planted" : "unplanted") + " " + to_string(spec.ambient) +
              " d=" + std::to_string(spec.d) + " sets=" + std::to_string(spec.n_sets) +
              " verts=" + std::to_string(spec.vertices_per_set);
  return inst;
}

std::string to_string(SegmentLayout layout) {
  switch (layout) {
    case SegmentLayout::uniform: return "uniform";
    case SegmentLayout::concurrent: return "concurrent";
    case SegmentLayout::near_miss: return "near_miss";
  }
  return "uniform";
}

Instance gen_segments(std::size_t n_sets, SegmentLayout layout, std::uint64_t seed) {
  if (n_sets < 1) throw MalformedInput("gen_segments: at least one set is required");
  Rng rng(seed);
  // Dyadic coordinates keep the concurrent layout exactly concurrent.
  constexpr double kTick = 1.0 / 1024.0;
  auto tick = [&](long lo, long hi) { return static_cast<double>(lo + static_cast<long>(rng.index(hi - lo + 1))) * kTick; };
  auto box = [&] { return Complex{tick(-1024, 1024), tick(-1024, 1024)}; };
  const Complex center{tick(-512, 512), tick(-512, 512)};
  std::vector<LabeledSet> sets;
  for (std::size_t s = 0; s < n_sets; ++s) {
    Complex a = box();
    Complex b = box();
    if (layout != SegmentLayout::uniform) {
      // center = (b + t a) / (1 + t), an exact convex combination.
      const double t = static_cast<double>(2 + rng.index(15)) / 16.0;
      b = center + t * (center - a);
    }
    if (layout == SegmentLayout::near_miss && s == 0) {
      const Complex along = b - a;
      const double push = tick(8, 96) * (rng.index(2) == 0 ? -1.0 : 1.0);
      a += push * Complex{-along.imag(), along.real()};
      b += push * Complex{-along.imag(), along.real()};
    }
    sets.push_back({"F" + std::to_string(s), Polytope::from_complex({ComplexVector{a}, ComplexVector{b}})});
  }
  Instance inst;
  inst.ambient = Ambient::complex;
  inst.d = 1;
  inst.family = Family(std::move(sets));
  inst.seed = seed;
  inst.note = "segments " + to_string(layout) + " sets=" + std::to_string(n_sets);
  return inst;
}

ConsistencyWitness witness_from_transversal(const Family& family, const ComplexHyperplane& hyperplane, double tol) {
  if (family.ambient() != Ambient::complex) throw MalformedInput("complex transversal for a real family");
  const std::size_t d = family.dim();
  require_same_dim(hyperplane.normal.size(), d, "witness_from_transversal");
  const ComplexHyperplane t = ComplexHyperplane::normalized(hyperplane.normal, hyperplane.offset);
  ComplexVector origin(d);
  for (std::size_t j = 0; j < d; ++j) origin[j] = t.offset * t.normal[j];
  const auto basis = d > 1 ? linalg::complement_basis(t.normal) : std::vector<ComplexVector>{};

  ConsistencyWitness w;
  w.ambient = Ambient::complex;
  w.k = d - 1;
  for (std::size_t i = 0; i < family.size(); ++i) {
    const Polytope& poly = family.polytope(i);
    // Nearest point q of the projected polygon to the offset; a preimage of q
    // in F, pushed along the normal onto T.
    const ProjectedPolygon polygon = project_along(t.normal, poly);
    const auto hull = planar::convex_hull(polygon.vertices);
    const Complex q = planar::closest_point(hull, t.offset);
    if (std::abs(q - t.offset) > tol) {
      throw MalformedInput("hyperplane misses set '" + family.label(i) + "'");
    }
    const ComplexEquation eq{t.normal, q};
    const FlatMeeting meet = flat_meets_polytope(std::span<const ComplexEquation>(&eq, 1), poly);
    ComplexVector p;
    if (meet.point) {
      p = *meet.point;
    } else {
      // q is a hull point to rounding; fall back to the nearest vertex image.
      std::size_t best = 0;
      for (std::size_t v = 1; v < polygon.vertices.size(); ++v) {
        if (std::abs(polygon.vertices[v] - q) < std::abs(polygon.vertices[best] - q)) best = v;
      }
      p = poly.complex_vertex_copy(best);
    }
    const Complex shift = t.offset - hermitian_inner(p, t.normal);
    for (std::size_t j = 0; j < d; ++j) p[j] += shift * t.normal[j] - origin[j];
    ComplexVector coords(basis.size());
    for (std::size_t b = 0; b < basis.size(); ++b) coords[b] = hermitian_inner(p, basis[b]);
    w.assignment[family.label(i)] = w.complex_points.size();
    w.complex_points.push_back(std::move(coords));
  }
  return w;
}

ConsistencyWitness witness_from_transversal(const Family& family, const RealHyperplane& hyperplane, double tol) {
  if (family.ambient() != Ambient::real) throw MalformedInput("real transversal for a complex family");
  const std::size_t d = family.dim();
  require_same_dim(hyperplane.normal.size(), d, "witness_from_transversal");
  double n = std::sqrt(real_dot(hyperplane.normal, hyperplane.normal));
  if (n < 1e-12) throw MalformedInput("hyperplane normal is zero");
  RealVector a = hyperplane.normal;
  for (auto& c : a) c /= n;
  const double b = hyperplane.offset / n;
  auto basis = linalg::null_space(std::vector<RealVector>{a}, d);

  ConsistencyWitness w;
  w.ambient = Ambient::real;
  w.k = d - 1;
  for (std::size_t i = 0; i < family.size(); ++i) {
    const Polytope& poly = family.polytope(i);
    std::size_t lo = 0;
    std::size_t hi = 0;
    std::vector<double> h(poly.size());
    for (std::size_t v = 0; v < poly.size(); ++v) {
      h[v] = real_dot(poly.real_vertex(v), a);
      if (h[v] < h[lo]) lo = v;
      if (h[v] > h[hi]) hi = v;
    }
    if (b < h[lo] - tol || b > h[hi] + tol) {
      throw MalformedInput("hyperplane misses set '" + family.label(i) + "'");
    }
    const double span = h[hi] - h[lo];
    const double t = span > 0.0 ? std::clamp((b - h[lo]) / span, 0.0, 1.0) : 0.0;
    RealVector p(d);
    const auto vl = poly.real_vertex(lo);
    const auto vh = poly.real_vertex(hi);
    for (std::size_t j = 0; j < d; ++j) p[j] = (1.0 - t) * vl[j] + t * vh[j];
    const double shift = b - real_dot(p, a);
    for (std::size_t j = 0; j < d; ++j) p[j] += (shift - b) * a[j];
    RealVector coords(basis.size());
    for (std::size_t k = 0; k < basis.size(); ++k) coords[k] = real_dot(p, basis[k]);
    w.assignment[family.label(i)] = w.real_points.size();
    w.real_points.push_back(std::move(coords));
  }
  return w;
}

json complex_to_json(Complex c) { return json::array({c.real(), c.imag()}); }

Complex complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw MalformedInput("complex number must be an [re, im] pair");
  return {number(j[0]), number(j[1])};
}

json to_json(const ComplexHyperplane& h) {
  return json{{"normal", complex_vector_to_json(h.normal)}, {"offset", complex_to_json(h.offset)}};
}

json to_json(const RealHyperplane& h) {
  return json{{"normal", real_vector_to_json(h.normal)}, {"offset", h.offset}};
}

ComplexHyperplane complex_hyperplane_from_json(const json& j) {
  if (!j.is_object()) throw MalformedInput("hyperplane must be an object");
  ComplexHyperplane h{complex_vector_from_json(field(j, "normal")), complex_from_json(field(j, "offset"))};
  if (h.normal.empty()) throw MalformedInput("hyperplane normal is empty");
  return h;
}

RealHyperplane real_hyperplane_from_json(const json& j) {
  if (!j.is_object()) throw MalformedInput("hyperplane must be an object");
  RealHyperplane h{real_vector_from_json(field(j, "normal")), number(field(j, "offset"))};
  if (h.normal.empty()) throw MalformedInput("hyperplane normal is empty");
  return h;
}

json to_json(const ConsistencyWitness& w) {
  json points = json::array();
  if (w.ambient == Ambient::complex) {
    for (const auto& p : w.complex_points) points.push_back(complex_vector_to_json(p));
  } else {
    for (const auto& p : w.real_points) points.push_back(real_vector_to_json(p));
  }
  json assignment = json::object();
  for (const auto& [label, index] : w.assignment) assignment[label] = index;
  return json{{"k", w.k}, {"points", points}, {"assignment", assignment}};
}

ConsistencyWitness witness_from_json(const json& j, Ambient ambient) {
  if (!j.is_object()) throw MalformedInput("witness must be an object");
  ConsistencyWitness w;
  w.ambient = ambient;
  const json& k = field(j, "k");
  if (!k.is_number_unsigned() && !(k.is_number_integer() && k.get<long long>() >= 0)) {
    throw MalformedInput("witness k must be a nonnegative integer");
  }
  w.k = k.get<std::size_t>();
  const json& points = field(j, "points");
  if (!points.is_array()) throw MalformedInput("witness points must be an array");
  for (const auto& p : points) {
    if (ambient == Ambient::complex) {
      w.complex_points.push_back(complex_vector_from_json(p));
      if (w.complex_points.back().size() != w.k) throw MalformedInput("witness point has the wrong dimension");
    } else {
      w.real_points.push_back(real_vector_from_json(p));
      if (w.real_points.back().size() != w.k) throw MalformedInput("witness point has the wrong dimension");
    }
  }
  const json& assignment = field(j, "assignment");
  if (!assignment.is_object()) throw MalformedInput("witness assignment must be an object");
  for (const auto& [label, index] : assignment.items()) {
    if (!index.is_number_integer() || index.get<long long>() < 0 ||
        static_cast<std::size_t>(index.get<long long>()) >= w.num_points()) {
      throw MalformedInput("witness assignment for '" + label + "' is out of range");
    }
    w.assignment[label] = index.get<std::size_t>();
  }
  return w;
}

json to_json(const Instance& inst) {
  json sets = json::array();
  for (const auto& s : inst.family) {
    json verts = json::array();
    for (std::size_t i = 0; i < s.polytope.size(); ++i) {
      if (inst.ambient == Ambient::complex) {
        verts.push_back(complex_vector_to_json(s.polytope.complex_vertex(i)));
      } else {
        verts.push_back(real_vector_to_json(s.polytope.real_vertex(i)));
      }
    }
    sets.push_back(json{{"label", s.label}, {"vertices", verts}});
  }
  json out{{"ambient", to_string(inst.ambient)}, {"d", inst.d}, {"sets", sets}};
  if (inst.witness) out["witness"] = to_json(*inst.witness);
  if (inst.planted) out["planted"] = to_json(*inst.planted);
  if (inst.planted_real) out["planted"] = to_json(*inst.planted_real);
  out["seed"] = inst.seed;
  if (!inst.note.empty()) out["note"] = inst.note;
  return out;
}

Instance instance_from_json(const json& j) {
  if (!j.is_object()) throw MalformedInput("instance must be an object");
  Instance inst;
  const json& amb = field(j, "ambient");
  if (!amb.is_string()) throw MalformedInput("ambient must be a string");
  inst.ambient = ambient_from_string(amb.get<std::string>());
  const json& d = field(j, "d");
  if (!d.is_number_integer() || d.get<long long>() < 1) throw MalformedInput("d must be a positive integer");
  inst.d = d.get<std::size_t>();

  const json& sets = field(j, "sets");
  if (!sets.is_array() || sets.empty()) throw MalformedInput("sets must be a nonempty array");
  std::vector<LabeledSet> family;
  for (const auto& s : sets) {
    if (!s.is_object()) throw MalformedInput("set must be an object");
    const json& label = field(s, "label");
    if (!label.is_string()) throw MalformedInput("set label must be a string");
    const json& verts = field(s, "vertices");
    if (!verts.is_array()) throw MalformedInput("set vertices must be an array");
    Polytope poly = [&] {
      if (inst.ambient == Ambient::complex) {
        std::vector<ComplexVector> vs;
        for (const auto& v : verts) vs.push_back(complex_vector_from_json(v));
        return Polytope::from_complex(vs);
      }
      std::vector<RealVector> vs;
      for (const auto& v : verts) vs.push_back(real_vector_from_json(v));
      return Polytope::from_real(vs);
    }();
    if (poly.dim() != inst.d) throw MalformedInput("set '" + label.get<std::string>() + "' has the wrong dimension");
    family.push_back({label.get<std::string>(), std::move(poly)});
  }
  inst.family = Family(std::move(family));

  if (auto it = j.find("witness"); it != j.end()) {
    inst.witness = witness_from_json(*it, inst.ambient);
    for (const auto& s : inst.family) {
      if (!inst.witness->assignment.count(s.label)) {
        throw MalformedInput("witness does not cover '" + s.label + "'");
      }
    }
  }
  if (auto it = j.find("planted"); it != j.end()) {
    if (inst.ambient == Ambient::complex) {
      inst.planted = complex_hyperplane_from_json(*it);
      require_same_dim(inst.planted->normal.size(), inst.d, "planted normal");
    } else {
      inst.planted_real = real_hyperplane_from_json(*it);
      require_same_dim(inst.planted_real->normal.size(), inst.d, "planted normal");
    }
  }
  const json& seed = field(j, "seed");
  if (!seed.is_number_integer()) throw MalformedInput("seed must be an integer");
  inst.seed = seed.get<std::uint64_t>();
  if (auto it = j.find("note"); it != j.end() && it->is_string()) inst.note = it->get<std::string>();
  return inst;
}

std::string serialize_instance(const Instance& instance) { return dump_json(to_json(instance)); }

Instance parse_instance(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw MalformedInput(std::string("instance is not valid JSON: ") + e.what());
  }
  try {
    return instance_from_json(j);
  } catch (const json::exception& e) {
    throw MalformedInput(std::string("instance has an invalid field: ") + e.what());
  } catch (const DimensionError& e) {
    throw MalformedInput(e.what());
  }
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MalformedInput("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str());
}

void save_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace tvlab
