#include "tvlab/transversal.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "tvlab/kernels.hpp"
#include "tvlab/linalg.hpp"
#include "tvlab/lp.hpp"
#include "tvlab/parallel.hpp"
#include "tvlab/random.hpp"

namespace tvlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMinStep = 1e-13;

RealVector normalized(RealVector v) {
  double n = 0.0;
  for (double c : v) n += c * c;
  n = std::sqrt(n);
  for (double& c : v) c /= n;
  return v;
}

// Rotates a complex normal so that its first nonzero coordinate is real positive.
ComplexVector canonical_phase(ComplexVector a) {
  for (const Complex& c : a) {
    if (std::abs(c) > 1e-15) {
      const Complex phase = std::conj(c) / std::abs(c);
      for (auto& x : a) x *= phase;
      break;
    }
  }
  return a;
}

// Compass search maximizing `score` over the unit sphere of R^n.
RealVector climb_real_sphere(RealVector u, double step, const SearchConfig& config,
                             const std::function<double(const RealVector&)>& score, double& best) {
  best = score(u);
  const std::size_t n = u.size();
  for (std::size_t it = 0; it < config.iterations && step > kMinStep; ++it) {
    std::vector<RealVector> basis;
    for (std::size_t i = 0; i < n; ++i) {
      RealVector e(n, 0.0);
      e[i] = 1.0;
      basis.push_back(std::move(e));
    }
    basis.insert(basis.begin(), u);
    linalg::orthonormalize(basis, 1e-8);
    bool improved = false;
    for (std::size_t b = 1; b < basis.size() && !improved; ++b) {
      for (double sign : {1.0, -1.0}) {
        RealVector cand(n);
        for (std::size_t i = 0; i < n; ++i) cand[i] = u[i] + sign * step * basis[b][i];
        cand = normalized(std::move(cand));
        const double s = score(cand);
        if (s > best) {
          best = s;
          u = std::move(cand);
          improved = true;
          break;
        }
      }
    }
    if (!improved) step *= config.step_decay;
  }
  return u;
}

std::vector<kernels::Interval> support_intervals(const Family& family, const RealVector& u) {
  std::vector<kernels::Interval> out;
  out.reserve(family.size());
  for (const auto& s : family) out.push_back(kernels::support_interval(s.polytope.data(), u));
  return out;
}

}  // namespace

double stabbing_margin(const Family& family, const RealVector& u) {
  double min_hi = kInf;
  double max_lo = -kInf;
  for (const auto& iv : support_intervals(family, u)) {
    min_hi = std::min(min_hi, iv.hi);
    max_lo = std::max(max_lo, iv.lo);
  }
  return min_hi - max_lo;
}

RealSearchResult real_hyperplane_transversal(const Family& family, const SearchConfig& config) {
  if (family.ambient() != Ambient::real) throw MalformedInput("real hyperplane search needs a real family");
  if (family.empty()) throw MalformedInput("empty family");
  const std::size_t d = family.dim();
  auto score = [&](const RealVector& u) { return stabbing_margin(family, u); };

  RealSearchResult res;
  res.best_margin = -kInf;
  auto consider = [&](const RealVector& u, double m) {
    if (m > res.best_margin) {
      res.best_margin = m;
      res.best_normal = u;
    }
  };

  if (d == 1) {
    const RealVector u{1.0};
    consider(u, score(u));
    res.exhaustive = true;
    res.grid_resolution = 1;
  } else if (d == 2) {
    const std::size_t g = std::max<std::size_t>(config.grid, 8);
    for (std::size_t k = 0; k < g; ++k) {
      const double t = std::numbers::pi * static_cast<double>(k) / static_cast<double>(g);
      const RealVector u{std::cos(t), std::sin(t)};
      consider(u, score(u));
    }
    res.exhaustive = true;
    res.grid_resolution = g;
    double refined = 0.0;
    RealVector u = climb_real_sphere(res.best_normal, std::numbers::pi / static_cast<double>(g), config, score,
                                     refined);
    consider(u, refined);
  } else if (d == 3) {
    const std::size_t polar = std::max<std::size_t>(config.grid / 10, 4);
    const std::size_t azim = std::max<std::size_t>(config.grid / 5, 8);
    for (std::size_t i = 0; i <= polar; ++i) {
      const double ph = 0.5 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(polar);
      for (std::size_t j = 0; j < azim; ++j) {
        const double th = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(azim);
        const RealVector u{std::sin(ph) * std::cos(th), std::sin(ph) * std::sin(th), std::cos(ph)};
        consider(u, score(u));
      }
    }
    res.grid_resolution = polar * azim;
    double refined = 0.0;
    RealVector u = climb_real_sphere(res.best_normal, 2.0 * std::numbers::pi / static_cast<double>(azim),
                                     config, score, refined);
    consider(u, refined);
  } else {
    for (std::size_t s = 0; s < config.starts && res.best_margin < -config.margin_tol; ++s) {
      Rng rng(mix_seed(config.seed, s));
      RealVector u(d);
      for (double& c : u) c = rng.normal();
      double m = 0.0;
      u = climb_real_sphere(normalized(std::move(u)), config.initial_step, config, score, m);
      consider(u, m);
    }
  }

  if (res.best_margin >= -config.margin_tol) {
    double min_hi = kInf;
    double max_lo = -kInf;
    for (const auto& iv : support_intervals(family, res.best_normal)) {
      min_hi = std::min(min_hi, iv.hi);
      max_lo = std::max(max_lo, iv.lo);
    }
    res.hyperplane = RealHyperplane{res.best_normal, 0.5 * (min_hi + max_lo)};
  }
  return res;
}

std::optional<Complex> complex_transversal_for_normal(const ComplexVector& normal, const Family& family) {
  if (family.ambient() != Ambient::complex) throw MalformedInput("complex transversal needs a complex family");
  std::size_t total = 0;
  for (const auto& s : family) {
    require_same_dim(s.polytope.dim(), normal.size(), "complex_transversal_for_normal");
    total += s.polytope.size();
  }
  // Variables: vertex weights per set, then b = (re, im) free.
  LinearProgram lp;
  lp.nonneg = total;
  lp.free = 2;
  std::size_t at = 0;
  for (const auto& s : family) {
    const auto poly = project_along(normal, s.polytope);
    RealVector ones(total + 2, 0.0);
    RealVector re(total + 2, 0.0);
    RealVector im(total + 2, 0.0);
    for (std::size_t v = 0; v < poly.vertices.size(); ++v) {
      ones[at + v] = 1.0;
      re[at + v] = poly.vertices[v].real();
      im[at + v] = poly.vertices[v].imag();
    }
    re[total] = -1.0;
    im[total + 1] = -1.0;
    lp.add_row(std::move(ones), 1.0);
    lp.add_row(std::move(re), 0.0);
    lp.add_row(std::move(im), 0.0);
    at += poly.vertices.size();
  }
  const auto cert = lp_feasible(lp);
  if (!cert.feasible()) return std::nullopt;
  return Complex{cert.witness[total], cert.witness[total + 1]};
}

PolygonMargin polygon_margin(const ComplexVector& normal, const Family& family) {
  std::vector<planar::HalfPlane> planes;
  for (const auto& s : family) {
    const auto poly = project_along(normal, s.polytope);
    const auto hull = planar::convex_hull(poly.vertices);
    const auto hp = planar::half_planes(hull);
    planes.insert(planes.end(), hp.begin(), hp.end());
  }
  // n . b + eps + slack = h, maximize eps; free variables (b_re, b_im, eps).
  const std::size_t m = planes.size();
  LinearProgram lp;
  lp.nonneg = m;
  lp.free = 3;
  for (std::size_t j = 0; j < m; ++j) {
    RealVector row(m + 3, 0.0);
    row[j] = 1.0;
    row[m] = planes[j].normal.real();
    row[m + 1] = planes[j].normal.imag();
    row[m + 2] = 1.0;
    lp.add_row(std::move(row), planes[j].offset);
  }
  RealVector obj(m + 3, 0.0);
  obj[m + 2] = -1.0;
  lp.objective = std::move(obj);
  const auto cert = lp_feasible(lp);
  return {cert.witness[m + 2], Complex{cert.witness[m], cert.witness[m + 1]}};
}

ComplexSearchResult find_complex_transversal(const Family& family, const SearchConfig& config) {
  if (family.ambient() != Ambient::complex) throw MalformedInput("complex transversal needs a complex family");
  if (family.empty()) throw MalformedInput("empty family");
  const std::size_t d = family.dim();
  ComplexSearchResult res;
  res.best_margin = -kInf;

  struct StartOutcome {
    ComplexVector normal;
    double margin = -kInf;
    std::size_t evaluations = 0;
  };

  auto run_start = [&](std::size_t s) {
    StartOutcome out;
    ComplexVector a(d);
    if (s == 0) {
      a[0] = 1.0;
    } else {
      Rng rng(mix_seed(config.seed, s));
      for (auto& c : a) c = rng.complex_normal();
      a = SpherePoint::normalized(std::move(a)).coords();
    }
    auto score = [&](const ComplexVector& n) {
      ++out.evaluations;
      return polygon_margin(n, family).margin;
    };
    double best = score(a);
    double step = config.initial_step;
    for (std::size_t it = 0; d > 1 && it < config.iterations && step > kMinStep && best < -config.margin_tol;
         ++it) {
      const auto basis = linalg::complement_basis(a);
      bool improved = false;
      for (std::size_t b = 0; b < 2 * basis.size() && !improved; ++b) {
        const Complex rot = b % 2 == 0 ? Complex{1.0, 0.0} : Complex{0.0, 1.0};
        for (double sign : {1.0, -1.0}) {
          ComplexVector cand(d);
          for (std::size_t i = 0; i < d; ++i) cand[i] = a[i] + sign * step * rot * basis[b / 2][i];
          cand = SpherePoint::normalized(std::move(cand)).coords();
          const double sc = score(cand);
          if (sc > best) {
            best = sc;
            a = std::move(cand);
            improved = true;
            break;
          }
        }
      }
      if (!improved) step *= config.step_decay;
    }
    out.normal = canonical_phase(std::move(a));
    out.margin = best;
    return out;
  };

  const std::size_t starts = std::max<std::size_t>(config.starts, 1);
  const std::size_t batch = std::max<std::size_t>(config.threads, 1);
  for (std::size_t first = 0; first < starts; first += batch) {
    const std::size_t last = std::min(starts, first + batch);
    std::vector<StartOutcome> outcomes(last - first);
    parallel_for(first, last, config.threads, [&](std::size_t s) { outcomes[s - first] = run_start(s); });
    // Starts are consumed in index order up to the first success, so the
    // result does not depend on the batch size.
    bool done = false;
    for (std::size_t i = 0; i < outcomes.size() && !done; ++i) {
      auto& o = outcomes[i];
      res.evaluations += o.evaluations;
      if (o.margin > res.best_margin) {
        res.best_margin = o.margin;
        res.best_normal = o.normal;
      }
      if (o.margin >= -config.margin_tol) {
        if (auto b = complex_transversal_for_normal(o.normal, family)) {
          res.hyperplane = ComplexHyperplane{o.normal, *b};
          res.best_margin = o.margin;
          res.best_normal = o.normal;
          done = true;
        }
      }
    }
    if (done) break;
  }
  return res;
}

// ---- odd map -----------------------------------------------------------------

namespace {

class BorsukEvaluator {
 public:
  BorsukEvaluator(const Family& family, const ConsistencyWitness& witness)
      : family_(family), images_(witness.complex_images(family)) {
    if (family.ambient() != Ambient::complex) throw MalformedInput("odd map needs a complex family");
    if (family.empty()) throw MalformedInput("empty family");
    if (family.dim() < 2) throw DimensionError("odd map needs sets embedded in H, dimension d+1 >= 2");
    require_same_dim(witness.k + 2, family.dim(), "borsuk_map witness");
  }

  std::size_t sphere_dim() const { return family_.dim(); }

  void coefficients(const ComplexVector& x, ComplexVector& out) {
    out.resize(family_.size());
    for (std::size_t f = 0; f < family_.size(); ++f) {
      const Polytope& poly = family_.polytope(f);
      buffer_.resize(poly.size());
      kernels::project_coefficients(poly.data(), x, buffer_);
      out[f] = planar::closest_point(planar::convex_hull(buffer_));
    }
  }

  // |f(x)|^2 together with the blocks.
  double value(const ComplexVector& coeffs, Complex& head, ComplexVector& tail) const {
    head = {0.0, 0.0};
    const std::size_t k = family_.dim() - 2;
    tail.assign(k, Complex{0.0, 0.0});
    for (std::size_t f = 0; f < coeffs.size(); ++f) {
      head += coeffs[f];
      const Complex cp = std::conj(coeffs[f]);
      for (std::size_t c = 0; c < k; ++c) tail[c] += cp * images_[f][c];
    }
    double s = std::norm(head);
    for (const auto& t : tail) s += std::norm(t);
    return s;
  }

  double squared_residual(const ComplexVector& x) {
    coefficients(x, coeffs_);
    return value(coeffs_, head_, tail_);
  }

 private:
  const Family& family_;
  std::vector<ComplexVector> images_;
  std::vector<Complex> buffer_;
  ComplexVector coeffs_;
  Complex head_;
  ComplexVector tail_;
};

ComplexVector unit(ComplexVector v) {
  double n = 0.0;
  for (const auto& c : v) n += std::norm(c);
  n = std::sqrt(n);
  for (auto& c : v) c /= n;
  return v;
}

// Tangent directions orthogonal to the phase orbit of x, negated along with x.
constexpr std::uint64_t kDiagonalSeed = 0x0dd5eed;
constexpr std::size_t kDiagonalSteps = 2;

std::vector<ComplexVector> odd_tangent_frame(const ComplexVector& x) {
  std::size_t lead = 0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (std::abs(x[i]) > std::abs(x[lead])) lead = i;
  }
  const Complex sigma = x[lead] / std::abs(x[lead]);
  std::vector<ComplexVector> frame;
  for (auto& u : linalg::complement_basis(x)) {
    ComplexVector a(u.size());
    ComplexVector b(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
      a[i] = sigma * u[i];
      b[i] = Complex{0.0, 1.0} * a[i];
    }
    frame.push_back(std::move(a));
    frame.push_back(std::move(b));
  }
  return frame;
}

DescentResult descend(BorsukEvaluator& eval, const ComplexVector& start, const SearchConfig& config) {
  ComplexVector x = start;
  std::size_t evals = 1;
  double fx = eval.squared_residual(x);
  const double target = config.zero_tol * config.zero_tol;
  const double polish = std::min(target, config.polish_tol * config.polish_tol);
  double step = config.initial_step;
  // Past the acceptance threshold the search continues toward polish_tol on
  // a budget of iterations/2 further steps.
  std::size_t polish_budget = config.iterations / 2;
  for (std::size_t it = 0; step > kMinStep && fx > polish; ++it) {
    if (fx > target ? it >= config.iterations : polish_budget-- == 0) break;
    auto frame = odd_tangent_frame(x);
    // Seeded combinations of the frame open diagonal valleys that coordinate
    // steps cannot follow. They are linear in the frame, so oddness survives.
    Rng rng(mix_seed(kDiagonalSeed, it));
    const std::size_t axes = frame.size();
    for (std::size_t extra = 0; extra < kDiagonalSteps; ++extra) {
      ComplexVector dir(x.size(), Complex{0.0, 0.0});
      double norm2 = 0.0;
      for (std::size_t b = 0; b < axes; ++b) {
        const double c = rng.normal();
        norm2 += c * c;
        for (std::size_t i = 0; i < x.size(); ++i) dir[i] += c * frame[b][i];
      }
      for (auto& v : dir) v /= std::sqrt(norm2);
      frame.push_back(std::move(dir));
    }
    bool improved = false;
    for (std::size_t b = 0; b < frame.size() && !improved; ++b) {
      for (double sign : {1.0, -1.0}) {
        ComplexVector cand(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) cand[i] = x[i] + (sign * step) * frame[b][i];
        cand = unit(std::move(cand));
        ++evals;
        const double fc = eval.squared_residual(cand);
        if (fc < fx) {
          fx = fc;
          x = std::move(cand);
          improved = true;
          break;
        }
      }
    }
    if (!improved) step *= config.step_decay;
  }
  return {SpherePoint::normalized(std::move(x)), std::sqrt(fx), evals};
}

}  // namespace

double BorsukEvaluation::norm() const {
  double s = std::norm(head);
  for (const auto& t : tail) s += std::norm(t);
  return std::sqrt(s);
}

RealVector BorsukEvaluation::as_real() const {
  RealVector out{head.real(), head.imag()};
  for (const auto& t : tail) {
    out.push_back(t.real());
    out.push_back(t.imag());
  }
  return out;
}

BorsukEvaluation borsuk_map(const SpherePoint& x, const Family& family, const ConsistencyWitness& witness) {
  BorsukEvaluator eval(family, witness);
  require_same_dim(x.size(), eval.sphere_dim(), "borsuk_map sphere point");
  BorsukEvaluation out{x, {}, {}, {}};
  eval.coefficients(x.coords(), out.coefficients);
  eval.value(out.coefficients, out.head, out.tail);
  return out;
}

DescentResult borsuk_descent(const SpherePoint& start, const Family& family, const ConsistencyWitness& witness,
                             const SearchConfig& config) {
  BorsukEvaluator eval(family, witness);
  require_same_dim(start.size(), eval.sphere_dim(), "borsuk_descent start");
  return descend(eval, start.coords(), config);
}

BorsukSearchResult find_borsuk_zero(const Family& family, const ConsistencyWitness& witness,
                                    const SearchConfig& config) {
  BorsukEvaluator probe(family, witness);
  const std::size_t n = probe.sphere_dim();
  const Family base = unembed_family(family);
  BorsukSearchResult res;
  res.residual = kInf;

  struct StartOutcome {
    std::optional<DescentResult> descent;
  };
  const std::size_t starts = std::max<std::size_t>(config.starts, 1);
  const std::size_t batch = std::max<std::size_t>(config.threads, 1);
  for (std::size_t first = 0; first < starts && !res.found(); first += batch) {
    const std::size_t last = std::min(starts, first + batch);
    std::vector<StartOutcome> outcomes(last - first);
    parallel_for(first, last, config.threads, [&](std::size_t s) {
      BorsukEvaluator eval(family, witness);
      Rng rng(mix_seed(config.seed, s));
      ComplexVector x(n);
      for (auto& c : x) c = rng.complex_normal();
      outcomes[s - first].descent = descend(eval, unit(std::move(x)), config);
    });
    for (std::size_t i = 0; i < outcomes.size() && !res.found(); ++i) {
      const DescentResult& d = *outcomes[i].descent;
      ++res.starts_used;
      const auto& x = d.x.coords();
      const double head_norm = hermitian_norm(std::span<const Complex>(x).first(n - 1));
      if (head_norm < kPoleGuard) {
        ++res.pole_rejections;
        continue;
      }
      if (d.residual < res.residual) {
        res.residual = d.residual;
        res.zero = d.x;
      }
      if (d.residual > config.zero_tol) continue;
      const ComplexHyperplane t = hyperplane_from_sphere_point(d.x);
      if (verify_transversal(t, base, config.verify_tol).pass) {
        res.zero = d.x;
        res.residual = d.residual;
        res.hyperplane = t;
      } else if (!res.angle_certificate) {
        const auto eval = borsuk_map(d.x, family, witness);
        AffineDependence dep;
        for (std::size_t f = 0; f < eval.coefficients.size(); ++f) {
          if (std::abs(eval.coefficients[f]) > 1e-6) {
            dep.support.push_back(f);
            dep.coefficients.push_back(std::conj(eval.coefficients[f]));
          }
        }
        res.angle_certificate = std::move(dep);
      }
    }
  }
  return res;
}

TransversalReport verify_transversal(const ComplexHyperplane& hyperplane, const Family& family, double tol) {
  TransversalReport rep;
  for (const auto& s : family) {
    require_same_dim(s.polytope.dim(), hyperplane.dim(), "verify_transversal");
    const auto poly = project_along(hyperplane.normal, s.polytope);
    const double dist = distance_to_polygon(poly, hyperplane.offset);
    rep.distances.push_back(dist);
    rep.max_distance = std::max(rep.max_distance, dist);
  }
  rep.pass = rep.max_distance <= tol;
  return rep;
}

TransversalReport verify_transversal(const RealHyperplane& hyperplane, const Family& family, double tol) {
  TransversalReport rep;
  for (const auto& s : family) {
    require_same_dim(s.polytope.dim(), hyperplane.normal.size(), "verify_transversal");
    const auto iv = kernels::support_interval(s.polytope.data(), hyperplane.normal);
    const double dist = std::max({0.0, iv.lo - hyperplane.offset, hyperplane.offset - iv.hi});
    rep.distances.push_back(dist);
    rep.max_distance = std::max(rep.max_distance, dist);
  }
  rep.pass = rep.max_distance <= tol;
  return rep;
}

}  // namespace tvlab
