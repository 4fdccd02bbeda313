#pragma once

#include <span>
#include <string>
#include <vector>

#include "tvlab/types.hpp"

namespace tvlab {

/// Convex hull (under real coefficients) of a nonempty vertex list.
///
/// Vertices are stored contiguously. A complex vertex of dimension d occupies
/// 2d doubles laid out as (re, im) pairs, which is also its coordinate vector in
/// the real embedding C^d = R^{2d}.
class Polytope {
 public:
  static Polytope from_real(const std::vector<RealVector>& vertices);
  static Polytope from_complex(const std::vector<ComplexVector>& vertices);

  Ambient ambient() const { return ambient_; }
  bool is_complex() const { return ambient_ == Ambient::complex; }
  /// Dimension over the ambient field.
  std::size_t dim() const { return dim_; }
  /// Number of doubles per vertex.
  std::size_t real_dim() const { return is_complex() ? 2 * dim_ : dim_; }
  std::size_t size() const { return count_; }

  std::span<const double> real_vertex(std::size_t i) const;
  std::span<const Complex> complex_vertex(std::size_t i) const;

  RealVector real_vertex_copy(std::size_t i) const;
  ComplexVector complex_vertex_copy(std::size_t i) const;

  /// Interleaved vertex storage, size() * real_dim() doubles.
  std::span<const double> data() const { return data_; }

  double max_vertex_norm() const;

  friend bool operator==(const Polytope&, const Polytope&) = default;

 private:
  Polytope(Ambient ambient, std::size_t dim, std::size_t count, std::vector<double> data)
      : ambient_(ambient), dim_(dim), count_(count), data_(std::move(data)) {}

  Ambient ambient_ = Ambient::real;
  std::size_t dim_ = 0;
  std::size_t count_ = 0;
  std::vector<double> data_;
};

struct LabeledSet {
  std::string label;
  Polytope polytope;

  friend bool operator==(const LabeledSet&, const LabeledSet&) = default;
};

/// Ordered, labeled family of polytopes sharing one ambient space.
class Family {
 public:
  Family() = default;
  explicit Family(std::vector<LabeledSet> sets);

  std::size_t size() const { return sets_.size(); }
  bool empty() const { return sets_.empty(); }
  const LabeledSet& operator[](std::size_t i) const { return sets_[i]; }
  const Polytope& polytope(std::size_t i) const { return sets_[i].polytope; }
  const std::string& label(std::size_t i) const { return sets_[i].label; }
  auto begin() const { return sets_.begin(); }
  auto end() const { return sets_.end(); }

  Ambient ambient() const;
  std::size_t dim() const;
  /// Index of the set with this label; throws MalformedInput if absent.
  std::size_t index_of(const std::string& label) const;

  friend bool operator==(const Family&, const Family&) = default;

 private:
  std::vector<LabeledSet> sets_;
};

/// Every set of a complex family lifted into H = {z_{d+1} = 1}.
Family embed_family(const Family& family);
/// Inverse of embed_family: drops the last coordinate of every vertex.
Family unembed_family(const Family& family);

}  // namespace tvlab
