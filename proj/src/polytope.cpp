#include "tvlab/polytope.hpp"

#include <cmath>
#include <unordered_set>

#include "tvlab/geometry.hpp"

namespace tvlab {

std::string to_string(Ambient ambient) {
  return ambient == Ambient::real ? "real" : "complex";
}

Ambient ambient_from_string(const std::string& name) {
  if (name == "real") return Ambient::real;
  if (name == "complex") return Ambient::complex;
  throw MalformedInput("unknown ambient '" + name + "'");
}

namespace {

void require_finite(double v) {
  if (!std::isfinite(v)) throw MalformedInput("polytope vertex has a non-finite coordinate");
}

}  // namespace

Polytope Polytope::from_real(const std::vector<RealVector>& vertices) {
  if (vertices.empty()) throw MalformedInput("polytope needs at least one vertex");
  const std::size_t d = vertices.front().size();
  if (d == 0) throw MalformedInput("polytope dimension must be at least 1");
  std::vector<double> data;
  data.reserve(d * vertices.size());
  for (const auto& v : vertices) {
    require_same_dim(v.size(), d, "polytope vertex");
    for (double c : v) {
      require_finite(c);
      data.push_back(c);
    }
  }
  return Polytope(Ambient::real, d, vertices.size(), std::move(data));
}

Polytope Polytope::from_complex(const std::vector<ComplexVector>& vertices) {
  if (vertices.empty()) throw MalformedInput("polytope needs at least one vertex");
  const std::size_t d = vertices.front().size();
  if (d == 0) throw MalformedInput("polytope dimension must be at least 1");
  std::vector<double> data;
  data.reserve(2 * d * vertices.size());
  for (const auto& v : vertices) {
    require_same_dim(v.size(), d, "polytope vertex");
    for (const Complex& c : v) {
      require_finite(c.real());
      require_finite(c.imag());
      data.push_back(c.real());
      data.push_back(c.imag());
    }
  }
  return Polytope(Ambient::complex, d, vertices.size(), std::move(data));
}

std::span<const double> Polytope::real_vertex(std::size_t i) const {
  return std::span<const double>(data_).subspan(i * real_dim(), real_dim());
}

std::span<const Complex> Polytope::complex_vertex(std::size_t i) const {
  if (!is_complex()) throw MalformedInput("complex view of a real polytope");
  // std::complex<double> is layout-compatible with double[2].
  const auto* base = reinterpret_cast<const Complex*>(data_.data());
  return {base + i * dim_, dim_};
}

RealVector Polytope::real_vertex_copy(std::size_t i) const {
  auto v = real_vertex(i);
  return {v.begin(), v.end()};
}

ComplexVector Polytope::complex_vertex_copy(std::size_t i) const {
  auto v = complex_vertex(i);
  return {v.begin(), v.end()};
}

double Polytope::max_vertex_norm() const {
  double best = 0.0;
  for (std::size_t i = 0; i < count_; ++i) {
    double s = 0.0;
    for (double c : real_vertex(i)) s += c * c;
    best = std::max(best, std::sqrt(s));
  }
  return best;
}

Family::Family(std::vector<LabeledSet> sets) : sets_(std::move(sets)) {
  std::unordered_set<std::string> seen;
  for (const auto& s : sets_) {
    if (!seen.insert(s.label).second) throw MalformedInput("duplicate set label '" + s.label + "'");
    if (s.polytope.ambient() != sets_.front().polytope.ambient()) {
      throw MalformedInput("family mixes real and complex sets");
    }
    require_same_dim(s.polytope.dim(), sets_.front().polytope.dim(), "family member");
  }
}

Ambient Family::ambient() const {
  return sets_.empty() ? Ambient::complex : sets_.front().polytope.ambient();
}

std::size_t Family::dim() const { return sets_.empty() ? 0 : sets_.front().polytope.dim(); }

std::size_t Family::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < sets_.size(); ++i) {
    if (sets_[i].label == label) return i;
  }
  throw MalformedInput("no set labeled '" + label + "'");
}

Family embed_family(const Family& family) {
  std::vector<LabeledSet> out;
  out.reserve(family.size());
  for (const auto& s : family) {
    if (!s.polytope.is_complex()) throw MalformedInput("embedding into H needs a complex family");
    std::vector<ComplexVector> verts;
    for (std::size_t i = 0; i < s.polytope.size(); ++i) {
      verts.push_back(embed_h(s.polytope.complex_vertex_copy(i)));
    }
    out.push_back({s.label, Polytope::from_complex(verts)});
  }
  return Family(std::move(out));
}

Family unembed_family(const Family& family) {
  std::vector<LabeledSet> out;
  out.reserve(family.size());
  for (const auto& s : family) {
    if (!s.polytope.is_complex() || s.polytope.dim() < 2) {
      throw MalformedInput("unembedding needs complex sets of dimension at least 2");
    }
    std::vector<ComplexVector> verts;
    for (std::size_t i = 0; i < s.polytope.size(); ++i) {
      auto v = s.polytope.complex_vertex_copy(i);
      v.pop_back();
      verts.push_back(std::move(v));
    }
    out.push_back({s.label, Polytope::from_complex(verts)});
  }
  return Family(std::move(out));
}

}  // namespace tvlab
