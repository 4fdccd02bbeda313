#include "tvlab/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace tvlab {

void LinearProgram::add_row(RealVector coeffs, double value) {
  rows.push_back(std::move(coeffs));
  rhs.push_back(value);
}

void LinearProgram::validate() const {
  if (rows.size() != rhs.size()) throw MalformedInput("linear program: row/rhs count mismatch");
  for (const auto& r : rows) {
    if (r.size() != num_vars()) throw MalformedInput("linear program: ragged constraint row");
    for (double c : r) {
      if (!std::isfinite(c)) throw MalformedInput("linear program: non-finite coefficient");
    }
  }
  for (double b : rhs) {
    if (!std::isfinite(b)) throw MalformedInput("linear program: non-finite right-hand side");
  }
  if (objective) {
    if (objective->size() != num_vars()) throw MalformedInput("linear program: objective size");
    for (double c : *objective) {
      if (!std::isfinite(c)) throw MalformedInput("linear program: non-finite objective");
    }
  }
}

namespace {

template <class T>
struct Arith;

template <>
struct Arith<double> {
  static constexpr double kPivot = 1e-10;
  static constexpr double kCost = 1e-10;
  static constexpr double kFeasible = 1e-9;
  static double from(double v) { return v; }
  static bool negative_cost(double v) { return v < -kCost; }
  static bool usable_pivot(double v) { return v > kPivot; }
  static bool nonzero(double v) { return std::abs(v) > kPivot; }
  static bool infeasible_residual(double v) { return v > kFeasible; }
};

template <>
struct Arith<mpq_class> {
  static mpq_class from(double v) { return mpq_class(v); }
  static bool negative_cost(const mpq_class& v) { return sgn(v) < 0; }
  static bool usable_pivot(const mpq_class& v) { return sgn(v) > 0; }
  static bool nonzero(const mpq_class& v) { return sgn(v) != 0; }
  static bool infeasible_residual(const mpq_class& v) { return sgn(v) > 0; }
};

template <class T>
struct SimplexOutcome {
  LpStatus status = LpStatus::infeasible;
  std::vector<T> x;
  std::vector<T> y;
  std::optional<T> objective;
};

// Dense two-phase tableau simplex with Bland's rule. Free variables are split
// into differences of nonnegative ones; each row gets an artificial column.
template <class T>
class DenseSimplex {
  using A = Arith<T>;

 public:
  explicit DenseSimplex(const LinearProgram& lp)
      : lp_(lp), m_(lp.rows.size()), n_(lp.nonneg + 2 * lp.free), width_(n_ + m_ + 1) {
    tab_.assign((m_ + 1) * width_, T(0));
    sign_.assign(m_, 1);
    basis_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      sign_[i] = lp.rhs[i] < 0.0 ? -1 : 1;
      const T s = T(sign_[i]);
      for (std::size_t j = 0; j < lp.num_vars(); ++j) {
        const T a = s * A::from(lp.rows[i][j]);
        set(i, column_of(j), a);
        if (j >= lp.nonneg) set(i, column_of(j) + 1, -a);
      }
      set(i, n_ + i, T(1));
      set(i, width_ - 1, s * A::from(lp.rhs[i]));
      basis_[i] = n_ + i;
    }
  }

  SimplexOutcome<T> solve() {
    SimplexOutcome<T> out;
    // Phase 1: minimize the sum of artificials.
    for (std::size_t j = 0; j < width_; ++j) {
      T s(0);
      if (j < n_ || j == width_ - 1) {
        for (std::size_t i = 0; i < m_; ++i) s -= at(i, j);
      }
      set(m_, j, s);
    }
    run(n_ + m_);
    const T phase1 = -at(m_, width_ - 1);
    if (A::infeasible_residual(phase1)) {
      out.status = LpStatus::infeasible;
      out.y.resize(m_);
      for (std::size_t i = 0; i < m_; ++i) {
        out.y[i] = T(sign_[i]) * (T(1) - at(m_, n_ + i));
      }
      return out;
    }
    drive_out_artificials();

    if (lp_.objective) {
      for (std::size_t j = 0; j < width_; ++j) set(m_, j, T(0));
      for (std::size_t j = 0; j < lp_.num_vars(); ++j) {
        const T c = A::from((*lp_.objective)[j]);
        set(m_, column_of(j), c);
        if (j >= lp_.nonneg) set(m_, column_of(j) + 1, -c);
      }
      for (std::size_t i = 0; i < m_; ++i) {
        const T cb = at(m_, basis_[i]);
        if (!A::nonzero(cb)) continue;
        for (std::size_t j = 0; j < width_; ++j) set(m_, j, at(m_, j) - cb * at(i, j));
      }
      if (!run(n_)) throw UnboundedError("linear program is unbounded below");
    }

    out.status = LpStatus::feasible;
    std::vector<T> split(n_, T(0));
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < n_) split[basis_[i]] = at(i, width_ - 1);
    }
    out.x.resize(lp_.num_vars());
    for (std::size_t j = 0; j < lp_.num_vars(); ++j) {
      out.x[j] = split[column_of(j)];
      if (j >= lp_.nonneg) out.x[j] -= split[column_of(j) + 1];
    }
    if (lp_.objective) {
      T v(0);
      for (std::size_t j = 0; j < lp_.num_vars(); ++j) v += A::from((*lp_.objective)[j]) * out.x[j];
      out.objective = v;
    }
    return out;
  }

 private:
  std::size_t column_of(std::size_t var) const {
    return var < lp_.nonneg ? var : lp_.nonneg + 2 * (var - lp_.nonneg);
  }
  const T& at(std::size_t i, std::size_t j) const { return tab_[i * width_ + j]; }
  void set(std::size_t i, std::size_t j, const T& v) { tab_[i * width_ + j] = v; }

  void pivot(std::size_t r, std::size_t c) {
    const T inv = T(1) / at(r, c);
    for (std::size_t j = 0; j < width_; ++j) set(r, j, at(r, j) * inv);
    set(r, c, T(1));
    for (std::size_t i = 0; i <= m_; ++i) {
      if (i == r) continue;
      const T f = at(i, c);
      if (!A::nonzero(f)) {
        set(i, c, T(0));
        continue;
      }
      for (std::size_t j = 0; j < width_; ++j) set(i, j, at(i, j) - f * at(r, j));
      set(i, c, T(0));
    }
    basis_[r] = c;
  }

  // Iterates with entering columns restricted to [0, limit). Returns false on
  // an unbounded ray.
  bool run(std::size_t limit) {
    for (;;) {
      std::size_t enter = limit;
      for (std::size_t j = 0; j < limit; ++j) {
        if (A::negative_cost(at(m_, j))) {
          enter = j;
          break;
        }
      }
      if (enter == limit) return true;
      std::size_t leave = m_;
      T best(0);
      for (std::size_t i = 0; i < m_; ++i) {
        if (!A::usable_pivot(at(i, enter))) continue;
        const T ratio = at(i, width_ - 1) / at(i, enter);
        if (leave == m_ || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == m_) return false;
      pivot(leave, enter);
    }
  }

  void drive_out_artificials() {
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      for (std::size_t j = 0; j < n_; ++j) {
        if (A::nonzero(at(i, j))) {
          pivot(i, j);
          break;
        }
      }
    }
  }

  const LinearProgram& lp_;
  std::size_t m_;
  std::size_t n_;
  std::size_t width_;
  std::vector<T> tab_;
  std::vector<int> sign_;
  std::vector<std::size_t> basis_;
};

double to_double(const mpq_class& q) { return q.get_d(); }

}  // namespace

FeasibilityCertificate lp_feasible(const LinearProgram& lp) {
  lp.validate();
  auto res = DenseSimplex<double>(lp).solve();
  FeasibilityCertificate cert;
  cert.status = res.status;
  if (res.status == LpStatus::feasible) {
    cert.witness = std::move(res.x);
    for (std::size_t j = 0; j < lp.nonneg; ++j) cert.witness[j] = std::max(cert.witness[j], 0.0);
    cert.objective_value = res.objective;
  } else {
    cert.farkas = std::move(res.y);
  }
  return cert;
}

ExactCertificate lp_feasible_exact(const LinearProgram& lp) {
  lp.validate();
  auto res = DenseSimplex<mpq_class>(lp).solve();
  ExactCertificate cert;
  cert.status = res.status;
  if (res.status == LpStatus::feasible) {
    cert.witness = std::move(res.x);
    cert.objective_value = res.objective;
  } else {
    cert.farkas = std::move(res.y);
  }
  return cert;
}

FeasibilityCertificate lp_feasible(const LinearProgram& lp, Arithmetic arithmetic) {
  if (arithmetic == Arithmetic::floating) return lp_feasible(lp);
  const ExactCertificate exact = lp_feasible_exact(lp);
  if (!certificate_holds_exact(lp, exact)) {
    throw std::logic_error("rational simplex produced a certificate that does not re-check");
  }
  FeasibilityCertificate cert;
  cert.status = exact.status;
  cert.exact = true;
  for (const auto& q : exact.witness) cert.witness.push_back(to_double(q));
  for (const auto& q : exact.farkas) cert.farkas.push_back(to_double(q));
  if (exact.objective_value) cert.objective_value = to_double(*exact.objective_value);
  return cert;
}

double certificate_violation(const LinearProgram& lp, const FeasibilityCertificate& cert) {
  const double inf = std::numeric_limits<double>::infinity();
  if (cert.feasible()) {
    if (cert.witness.size() != lp.num_vars()) return inf;
    double worst = 0.0;
    for (std::size_t j = 0; j < lp.nonneg; ++j) worst = std::max(worst, -cert.witness[j]);
    for (std::size_t i = 0; i < lp.rows.size(); ++i) {
      double s = -lp.rhs[i];
      for (std::size_t j = 0; j < lp.num_vars(); ++j) s += lp.rows[i][j] * cert.witness[j];
      worst = std::max(worst, std::abs(s));
    }
    return worst;
  }
  if (cert.farkas.size() != lp.rows.size()) return inf;
  double yb = 0.0;
  for (std::size_t i = 0; i < lp.rows.size(); ++i) yb += cert.farkas[i] * lp.rhs[i];
  if (!(yb > 0.0)) return inf;
  double worst = 0.0;
  for (std::size_t j = 0; j < lp.num_vars(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < lp.rows.size(); ++i) s += cert.farkas[i] * lp.rows[i][j];
    s /= yb;
    worst = std::max(worst, j < lp.nonneg ? s : std::abs(s));
  }
  return worst;
}

bool certificate_holds(const LinearProgram& lp, const FeasibilityCertificate& cert, double tol) {
  return certificate_violation(lp, cert) <= tol;
}

bool certificate_holds_exact(const LinearProgram& lp, const ExactCertificate& cert) {
  const std::size_t m = lp.rows.size();
  const std::size_t n = lp.num_vars();
  if (cert.feasible()) {
    if (cert.witness.size() != n) return false;
    for (std::size_t j = 0; j < lp.nonneg; ++j) {
      if (sgn(cert.witness[j]) < 0) return false;
    }
    for (std::size_t i = 0; i < m; ++i) {
      mpq_class s = -mpq_class(lp.rhs[i]);
      for (std::size_t j = 0; j < n; ++j) s += mpq_class(lp.rows[i][j]) * cert.witness[j];
      if (sgn(s) != 0) return false;
    }
    return true;
  }
  if (cert.farkas.size() != m) return false;
  mpq_class yb = 0;
  for (std::size_t i = 0; i < m; ++i) yb += cert.farkas[i] * mpq_class(lp.rhs[i]);
  if (sgn(yb) <= 0) return false;
  for (std::size_t j = 0; j < n; ++j) {
    mpq_class s = 0;
    for (std::size_t i = 0; i < m; ++i) s += cert.farkas[i] * mpq_class(lp.rows[i][j]);
    if (j < lp.nonneg ? sgn(s) > 0 : sgn(s) != 0) return false;
  }
  return true;
}

HullIntersection hulls_intersect(const Polytope& u, const Polytope& v, Arithmetic arithmetic) {
  if (u.ambient() != v.ambient()) throw DimensionError("hulls_intersect: mixed ambients");
  require_same_dim(u.dim(), v.dim(), "hulls_intersect");
  const std::size_t d = u.real_dim();
  const std::size_t nu = u.size();
  const std::size_t nv = v.size();
  LinearProgram lp;
  lp.nonneg = nu + nv;
  RealVector row(nu + nv, 0.0);
  std::fill(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(nu), 1.0);
  lp.add_row(row, 1.0);
  std::fill(row.begin(), row.end(), 0.0);
  std::fill(row.begin() + static_cast<std::ptrdiff_t>(nu), row.end(), 1.0);
  lp.add_row(row, 1.0);
  for (std::size_t c = 0; c < d; ++c) {
    RealVector r(nu + nv);
    for (std::size_t i = 0; i < nu; ++i) r[i] = u.real_vertex(i)[c];
    for (std::size_t i = 0; i < nv; ++i) r[nu + i] = -v.real_vertex(i)[c];
    lp.add_row(std::move(r), 0.0);
  }
  HullIntersection out{lp_feasible(lp, arithmetic), std::nullopt};
  if (out.certificate.feasible()) {
    RealVector p(d, 0.0);
    for (std::size_t i = 0; i < nu; ++i) {
      for (std::size_t c = 0; c < d; ++c) p[c] += out.certificate.witness[i] * u.real_vertex(i)[c];
    }
    out.point = std::move(p);
  }
  return out;
}

namespace {

// Calls visit(indices) for every k-subset of {0..n-1} in lexicographic order;
// stops early when visit returns false.
template <class Visit>
bool for_each_subset(std::size_t n, std::size_t k, Visit&& visit) {
  if (k > n) return true;
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

}  // namespace

KirchbergerVerdict kirchberger_separated(std::span<const RealVector> u, std::span<const RealVector> v,
                                         std::size_t k, Arithmetic arithmetic) {
  for (const auto& p : u) require_same_dim(p.size(), k, "kirchberger_separated");
  for (const auto& p : v) require_same_dim(p.size(), k, "kirchberger_separated");
  KirchbergerVerdict verdict;
  const std::size_t n = u.size() + v.size();
  const std::size_t s = std::min(k + 2, n);
  for_each_subset(n, s, [&](const std::vector<std::size_t>& idx) {
    std::vector<RealVector> su;
    std::vector<RealVector> sv;
    std::vector<std::size_t> iu;
    std::vector<std::size_t> iv;
    for (std::size_t i : idx) {
      if (i < u.size()) {
        su.push_back(u[i]);
        iu.push_back(i);
      } else {
        sv.push_back(v[i - u.size()]);
        iv.push_back(i - u.size());
      }
    }
    if (su.empty() || sv.empty()) return true;
    if (k == 0 || hulls_intersect(Polytope::from_real(su), Polytope::from_real(sv), arithmetic).intersect()) {
      verdict.separated = false;
      verdict.u_indices = std::move(iu);
      verdict.v_indices = std::move(iv);
      return false;
    }
    return true;
  });
  return verdict;
}

FlatMeeting flat_meets_polytope(std::span<const ComplexEquation> equations, const Polytope& polytope,
                                Arithmetic arithmetic) {
  if (!polytope.is_complex()) throw DimensionError("flat_meets_polytope: complex polytope required");
  for (const auto& e : equations) require_same_dim(e.normal.size(), polytope.dim(), "flat_meets_polytope");
  const std::size_t nv = polytope.size();
  LinearProgram lp;
  lp.nonneg = nv;
  lp.add_row(RealVector(nv, 1.0), 1.0);
  for (const auto& e : equations) {
    RealVector re(nv);
    RealVector im(nv);
    for (std::size_t i = 0; i < nv; ++i) {
      Complex c{0.0, 0.0};
      const auto vert = polytope.complex_vertex(i);
      for (std::size_t j = 0; j < e.normal.size(); ++j) c += vert[j] * std::conj(e.normal[j]);
      re[i] = c.real();
      im[i] = c.imag();
    }
    lp.add_row(std::move(re), e.value.real());
    lp.add_row(std::move(im), e.value.imag());
  }
  FlatMeeting out{lp_feasible(lp, arithmetic), std::nullopt};
  if (out.certificate.feasible()) {
    ComplexVector z(polytope.dim(), Complex{0.0, 0.0});
    for (std::size_t i = 0; i < nv; ++i) {
      const auto vert = polytope.complex_vertex(i);
      for (std::size_t j = 0; j < z.size(); ++j) z[j] += out.certificate.witness[i] * vert[j];
    }
    out.point = std::move(z);
  }
  return out;
}

LinearProgram cone_program(const std::vector<std::vector<RealVector>>& groups) {
  std::size_t count = 0;
  std::size_t dim = 0;
  bool have_dim = false;
  for (const auto& g : groups) {
    for (const auto& w : g) {
      if (!have_dim) {
        dim = w.size();
        have_dim = true;
      }
      require_same_dim(w.size(), dim, "nontrivial_zero_in_cone");
      ++count;
    }
  }
  LinearProgram lp;
  lp.nonneg = count;
  lp.add_row(RealVector(count, 1.0), 1.0);
  for (std::size_t c = 0; c < dim; ++c) {
    RealVector row;
    row.reserve(count);
    for (const auto& g : groups) {
      for (const auto& w : g) row.push_back(w[c]);
    }
    lp.add_row(std::move(row), 0.0);
  }
  return lp;
}

ConeZero nontrivial_zero_in_cone(const std::vector<std::vector<RealVector>>& groups, Arithmetic arithmetic) {
  const LinearProgram lp = cone_program(groups);
  ConeZero out{lp_feasible(lp, arithmetic), {}, {}};
  if (out.certificate.feasible()) {
    std::size_t at = 0;
    for (const auto& g : groups) {
      RealVector w(out.certificate.witness.begin() + static_cast<std::ptrdiff_t>(at),
                   out.certificate.witness.begin() + static_cast<std::ptrdiff_t>(at + g.size()));
      at += g.size();
      double total = 0.0;
      for (double x : w) total += x;
      out.group_weights.push_back(total);
      out.weights.push_back(std::move(w));
    }
  }
  return out;
}

CommonPoint common_point(const Family& family, Arithmetic arithmetic) {
  if (family.empty()) throw MalformedInput("common_point: empty family");
  const std::size_t d = family.polytope(0).real_dim();
  std::size_t total = 0;
  for (const auto& s : family) total += s.polytope.size();
  LinearProgram lp;
  lp.nonneg = total;
  lp.free = d;
  std::size_t offset = 0;
  for (const auto& s : family) {
    const Polytope& p = s.polytope;
    RealVector sum(total + d, 0.0);
    for (std::size_t i = 0; i < p.size(); ++i) sum[offset + i] = 1.0;
    lp.add_row(std::move(sum), 1.0);
    for (std::size_t c = 0; c < d; ++c) {
      RealVector r(total + d, 0.0);
      for (std::size_t i = 0; i < p.size(); ++i) r[offset + i] = p.real_vertex(i)[c];
      r[total + c] = -1.0;
      lp.add_row(std::move(r), 0.0);
    }
    offset += p.size();
  }
  CommonPoint out{lp_feasible(lp, arithmetic), std::nullopt};
  if (out.certificate.feasible()) {
    out.point = RealVector(out.certificate.witness.begin() + static_cast<std::ptrdiff_t>(total),
                           out.certificate.witness.end());
  }
  return out;
}

}  // namespace tvlab
