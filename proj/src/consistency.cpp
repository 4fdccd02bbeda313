#include "tvlab/consistency.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "tvlab/geometry.hpp"
#include "tvlab/linalg.hpp"
#include "tvlab/random.hpp"

namespace tvlab {

namespace {

constexpr double kZeroCoeff = 1e-12;

template <class Visit>
bool for_each_subset(std::size_t n, std::size_t k, Visit&& visit) {
  if (k > n || k == 0) return true;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  for (;;) {
    if (!visit(std::as_const(idx))) return false;
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) return true;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

const ComplexVector& image_at(const std::vector<ComplexVector>& images, std::size_t i) {
  if (i >= images.size()) throw MalformedInput("dependence refers to a label outside the family");
  return images[i];
}

// Unit norm, largest coefficient real positive, negligible entries dropped.
AffineDependence normalize(std::vector<std::size_t> support, ComplexVector a) {
  const double n = hermitian_norm(a);
  double biggest = 0.0;
  for (const auto& c : a) biggest = std::max(biggest, std::abs(c));
  std::size_t lead = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i]) >= biggest * (1.0 - 1e-9)) {
      lead = i;
      break;
    }
  }
  const Complex phase = std::conj(a[lead]) / std::abs(a[lead]);
  AffineDependence out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Complex c = a[i] * phase / n;
    if (std::abs(c) <= kZeroCoeff) continue;
    out.support.push_back(support[i]);
    out.coefficients.push_back(c);
  }
  return out;
}

std::uint64_t subset_seed(std::uint64_t seed, const std::vector<std::size_t>& idx) {
  std::uint64_t h = mix_seed(seed, idx.size());
  for (std::size_t i : idx) h = mix_seed(h, i);
  return h;
}

}  // namespace

std::vector<ComplexVector> ConsistencyWitness::complex_images(const Family& family) const {
  if (ambient != Ambient::complex) throw MalformedInput("witness is not complex");
  std::vector<ComplexVector> out;
  out.reserve(family.size());
  for (const auto& s : family) {
    auto it = assignment.find(s.label);
    if (it == assignment.end()) throw MalformedInput("witness does not assign '" + s.label + "'");
    if (it->second >= complex_points.size()) throw MalformedInput("witness index out of range");
    const auto& p = complex_points[it->second];
    if (p.size() != k) throw MalformedInput("witness point has the wrong dimension");
    out.push_back(p);
  }
  return out;
}

std::vector<RealVector> ConsistencyWitness::real_images(const Family& family) const {
  if (ambient != Ambient::real) throw MalformedInput("witness is not real");
  std::vector<RealVector> out;
  out.reserve(family.size());
  for (const auto& s : family) {
    auto it = assignment.find(s.label);
    if (it == assignment.end()) throw MalformedInput("witness does not assign '" + s.label + "'");
    if (it->second >= real_points.size()) throw MalformedInput("witness index out of range");
    const auto& p = real_points[it->second];
    if (p.size() != k) throw MalformedInput("witness point has the wrong dimension");
    out.push_back(p);
  }
  return out;
}

ConsistencyWitness ConsistencyWitness::trivial(const Family& family) {
  ConsistencyWitness w;
  w.ambient = Ambient::complex;
  w.k = 0;
  w.complex_points.push_back({});
  for (const auto& s : family) w.assignment[s.label] = 0;
  return w;
}

double AffineDependence::residual(const std::vector<ComplexVector>& images) const {
  if (support.size() != coefficients.size()) throw MalformedInput("dependence support/coefficient mismatch");
  Complex total{0.0, 0.0};
  ComplexVector weighted;
  for (std::size_t i = 0; i < support.size(); ++i) {
    const auto& p = image_at(images, support[i]);
    if (weighted.empty()) weighted.assign(p.size(), Complex{0.0, 0.0});
    total += coefficients[i];
    for (std::size_t c = 0; c < p.size(); ++c) weighted[c] += coefficients[i] * p[c];
  }
  double worst = std::abs(total);
  for (const auto& w : weighted) worst = std::max(worst, std::abs(w));
  return worst;
}

double Lift::residual() const {
  Complex total{0.0, 0.0};
  ComplexVector weighted;
  for (std::size_t i = 0; i < support.size(); ++i) {
    if (weighted.empty()) weighted.assign(points[i].size(), Complex{0.0, 0.0});
    total += products[i];
    for (std::size_t c = 0; c < points[i].size(); ++c) weighted[c] += products[i] * points[i][c];
  }
  double worst = std::abs(total);
  for (const auto& w : weighted) worst = std::max(worst, std::abs(w));
  return worst;
}

std::size_t max_support(std::size_t k) { return 2 * k + 3; }

void for_each_dependence(const Family& family, const ConsistencyWitness& witness,
                         const ConsistencyConfig& config,
                         const std::function<bool(const AffineDependence&)>& visit) {
  const auto images = witness.complex_images(family);
  const std::size_t n = family.size();
  const std::size_t k = witness.k;
  std::map<std::vector<std::size_t>, std::vector<ComplexVector>> seen;

  auto emit = [&](AffineDependence dep) {
    if (dep.support.size() < 2) return true;
    auto& bucket = seen[dep.support];
    for (const auto& prev : bucket) {
      double diff = 0.0;
      for (std::size_t i = 0; i < prev.size(); ++i) diff = std::max(diff, std::abs(prev[i] - dep.coefficients[i]));
      if (diff < 1e-9) return true;
    }
    bucket.push_back(dep.coefficients);
    return visit(dep);
  };

  const std::size_t top = std::min(n, max_support(k));
  for (std::size_t size = 2; size <= top; ++size) {
    const bool go_on = for_each_subset(n, size, [&](const std::vector<std::size_t>& idx) {
      std::vector<ComplexVector> rows(k + 1, ComplexVector(size));
      for (std::size_t j = 0; j < size; ++j) {
        for (std::size_t c = 0; c < k; ++c) rows[c][j] = images[idx[j]][c];
        rows[k][j] = 1.0;
      }
      const auto basis = linalg::null_space(rows, size);
      if (basis.empty()) return true;
      if (basis.size() == 1) return emit(normalize(idx, basis.front()));
      Rng rng(subset_seed(config.seed, idx));
      for (std::size_t s = 0; s < config.samples; ++s) {
        ComplexVector a(size, Complex{0.0, 0.0});
        for (const auto& b : basis) {
          const Complex g = rng.complex_normal();
          for (std::size_t j = 0; j < size; ++j) a[j] += g * b[j];
        }
        if (!emit(normalize(idx, std::move(a)))) return false;
      }
      return true;
    });
    if (!go_on) return;
  }
}

std::vector<AffineDependence> enumerate_dependences(const Family& family, const ConsistencyWitness& witness,
                                                    const ConsistencyConfig& config) {
  std::vector<AffineDependence> out;
  for_each_dependence(family, witness, config, [&](const AffineDependence& d) {
    out.push_back(d);
    return true;
  });
  return out;
}

LiftOutcome lift_dependence(const Family& family, const AffineDependence& dependence, Arithmetic arithmetic) {
  if (dependence.support.size() != dependence.coefficients.size()) {
    throw MalformedInput("dependence support/coefficient mismatch");
  }
  double biggest = 0.0;
  for (const auto& a : dependence.coefficients) biggest = std::max(biggest, std::abs(a));

  std::vector<std::size_t> support;
  ComplexVector coeffs;
  std::vector<std::vector<RealVector>> groups;
  for (std::size_t i = 0; i < dependence.support.size(); ++i) {
    const Complex a = dependence.coefficients[i];
    if (!(std::abs(a) > kZeroCoeff * biggest)) continue;
    if (dependence.support[i] >= family.size()) throw MalformedInput("dependence label outside family");
    const Polytope& poly = family.polytope(dependence.support[i]);
    if (!poly.is_complex()) throw MalformedInput("lift_dependence needs a complex family");
    std::vector<RealVector> gens;
    for (std::size_t v = 0; v < poly.size(); ++v) {
      RealVector w;
      w.reserve(2 * poly.dim() + 2);
      for (const Complex& c : poly.complex_vertex(v)) {
        const Complex ac = a * c;
        w.push_back(ac.real());
        w.push_back(ac.imag());
      }
      w.push_back(a.real());
      w.push_back(a.imag());
      gens.push_back(std::move(w));
    }
    support.push_back(dependence.support[i]);
    coeffs.push_back(a);
    groups.push_back(std::move(gens));
  }

  LiftOutcome out;
  if (groups.empty()) {
    out.certificate.status = LpStatus::infeasible;
    return out;
  }
  ConeZero cone = nontrivial_zero_in_cone(groups, arithmetic);
  out.certificate = cone.certificate;
  if (!cone.found()) return out;

  Lift lift;
  lift.support = support;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const Polytope& poly = family.polytope(support[g]);
    const double r = cone.group_weights[g];
    ComplexVector p(poly.dim(), Complex{0.0, 0.0});
    RealVector weights(poly.size(), 0.0);
    if (r > 0.0) {
      for (std::size_t v = 0; v < poly.size(); ++v) {
        weights[v] = cone.weights[g][v] / r;
        const auto vert = poly.complex_vertex(v);
        for (std::size_t c = 0; c < p.size(); ++c) p[c] += weights[v] * vert[c];
      }
    } else {
      weights[0] = 1.0;
      p = poly.complex_vertex_copy(0);
    }
    lift.r.push_back(r);
    lift.points.push_back(std::move(p));
    lift.products.push_back(r * coeffs[g]);
    lift.vertex_weights.push_back(std::move(weights));
  }
  out.lift = std::move(lift);
  return out;
}

ConsistencyVerdict check_dependency_consistency(const Family& family, const ConsistencyWitness& witness,
                                                const ConsistencyConfig& config) {
  if (family.ambient() != Ambient::complex) throw MalformedInput("dependency consistency needs a complex family");
  ConsistencyVerdict verdict;
  verdict.samples = config.samples;
  const auto images = witness.complex_images(family);
  for_each_dependence(family, witness, config, [&](const AffineDependence& dep) {
    ++verdict.dependences_checked;
    if (dep.residual(images) > config.tol) return true;
    if (lift_dependence(family, dep).lifted()) return true;
    if (config.exact) {
      if (lift_dependence(family, dep, Arithmetic::rational).lifted()) return true;
      verdict.exact_confirmed = true;
    }
    verdict.pass = false;
    verdict.violation = dep;
    return false;
  });
  return verdict;
}

namespace {

Polytope union_hull(const Family& family, const std::vector<std::size_t>& members) {
  std::vector<RealVector> verts;
  for (std::size_t m : members) {
    const Polytope& p = family.polytope(m);
    for (std::size_t v = 0; v < p.size(); ++v) verts.push_back(p.real_vertex_copy(v));
  }
  return Polytope::from_real(verts);
}

}  // namespace

ConsistencyVerdict separates_consistently(const Family& family, const ConsistencyWitness& witness,
                                          Arithmetic arithmetic) {
  if (family.ambient() != Ambient::real) throw MalformedInput("separates_consistently needs a real family");
  const auto images = witness.real_images(family);
  const std::size_t k = witness.k;
  const std::size_t n = family.size();
  ConsistencyVerdict verdict;

  auto images_meet = [&](const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    if (k == 0) return true;
    std::vector<RealVector> pa;
    std::vector<RealVector> pb;
    for (std::size_t i : a) pa.push_back(images[i]);
    for (std::size_t i : b) pb.push_back(images[i]);
    return hulls_intersect(Polytope::from_real(pa), Polytope::from_real(pb), arithmetic).intersect();
  };

  const std::size_t top = std::min(n, k + 2);
  for (std::size_t size = 2; size <= top && verdict.pass; ++size) {
    for_each_subset(n, size, [&](const std::vector<std::size_t>& idx) {
      // idx[0] always sits in the first part so each unordered split appears once.
      const std::size_t rest = size - 1;
      for (std::size_t mask = 0; mask + 1 < (std::size_t{1} << rest); ++mask) {
        SubfamilyPair pair;
        pair.first.push_back(idx[0]);
        for (std::size_t b = 0; b < rest; ++b) {
          ((mask >> b) & 1U ? pair.first : pair.second).push_back(idx[b + 1]);
        }
        ++verdict.dependences_checked;
        if (!images_meet(pair.first, pair.second)) continue;
        if (hulls_intersect(union_hull(family, pair.first), union_hull(family, pair.second), arithmetic)
                .intersect()) {
          continue;
        }
        verdict.pass = false;
        verdict.exact_confirmed = arithmetic == Arithmetic::rational;
        verdict.violating_pair = std::move(pair);
        return false;
      }
      return true;
    });
  }
  return verdict;
}

ReducedDependence reduce_support(const AffineDependence& dependence, const std::vector<ComplexVector>& images,
                                 std::size_t k) {
  const std::size_t s0 = dependence.support.size();
  std::vector<RealVector> pts;
  for (std::size_t i = 0; i < s0; ++i) {
    const auto& phi = image_at(images, dependence.support[i]);
    require_same_dim(phi.size(), k, "reduce_support");
    const Complex a = dependence.coefficients[i];
    RealVector w;
    for (const Complex& c : phi) {
      w.push_back((a * c).real());
      w.push_back((a * c).imag());
    }
    w.push_back(a.real());
    w.push_back(a.imag());
    pts.push_back(std::move(w));
  }

  std::vector<std::size_t> alive(s0);
  for (std::size_t i = 0; i < s0; ++i) alive[i] = i;
  RealVector scale(s0, 1.0);
  const std::size_t limit = max_support(k);
  const std::size_t dim = 2 * k + 2;

  while (alive.size() > limit) {
    // Affine dependence mu among the surviving points: sum mu w = 0, sum mu = 0.
    std::vector<RealVector> rows(dim + 1, RealVector(alive.size()));
    for (std::size_t j = 0; j < alive.size(); ++j) {
      for (std::size_t c = 0; c < dim; ++c) rows[c][j] = pts[alive[j]][c];
      rows[dim][j] = 1.0;
    }
    const auto basis = linalg::null_space(rows, alive.size());
    if (basis.empty()) throw std::logic_error("reduce_support: no affine dependence among too many points");
    const RealVector& mu = basis.front();
    std::size_t drop = alive.size();
    double alpha = 0.0;
    for (std::size_t j = 0; j < alive.size(); ++j) {
      if (mu[j] <= 0.0) continue;
      const double ratio = scale[alive[j]] / mu[j];
      if (drop == alive.size() || ratio < alpha) {
        alpha = ratio;
        drop = j;
      }
    }
    if (drop == alive.size()) throw std::logic_error("reduce_support: dependence has no positive entry");
    for (std::size_t j = 0; j < alive.size(); ++j) scale[alive[j]] -= alpha * mu[j];
    scale[alive[drop]] = 0.0;
    std::vector<std::size_t> next;
    for (std::size_t j = 0; j < alive.size(); ++j) {
      if (scale[alive[j]] > 0.0) next.push_back(alive[j]);
    }
    alive = std::move(next);
  }

  ReducedDependence out;
  for (std::size_t i : alive) {
    out.dependence.support.push_back(dependence.support[i]);
    out.dependence.coefficients.push_back(scale[i] * dependence.coefficients[i]);
    out.scales.push_back(scale[i]);
  }
  return out;
}

}  // namespace tvlab
