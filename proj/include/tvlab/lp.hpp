#pragma once

#include <gmpxx.h>

#include <optional>
#include <span>
#include <vector>

#include "tvlab/polytope.hpp"
#include "tvlab/types.hpp"

namespace tvlab {

/// Equality-constrained linear program over `nonneg` nonnegative variables
/// followed by `free` unrestricted ones: A x = b, optionally minimizing c . x.
struct LinearProgram {
  std::size_t nonneg = 0;
  std::size_t free = 0;
  std::vector<RealVector> rows;
  RealVector rhs;
  std::optional<RealVector> objective;

  std::size_t num_vars() const { return nonneg + free; }
  void add_row(RealVector coeffs, double value);
  /// Throws MalformedInput on ragged rows or non-finite data.
  void validate() const;
};

enum class LpStatus { feasible, infeasible };
enum class Arithmetic { floating, rational };

/// Feasible: `witness` solves the program (and is optimal when an objective
/// was given). Infeasible: `farkas` is a row functional y with y.A <= 0 on the
/// nonnegative columns, y.A = 0 on the free columns and y.b > 0.
struct FeasibilityCertificate {
  LpStatus status = LpStatus::infeasible;
  RealVector witness;
  RealVector farkas;
  std::optional<double> objective_value;
  /// Produced and re-checked in rational arithmetic.
  bool exact = false;

  bool feasible() const { return status == LpStatus::feasible; }
};

struct ExactCertificate {
  LpStatus status = LpStatus::infeasible;
  std::vector<mpq_class> witness;
  std::vector<mpq_class> farkas;
  std::optional<mpq_class> objective_value;

  bool feasible() const { return status == LpStatus::feasible; }
};

inline constexpr double kLpTol = 1e-9;

FeasibilityCertificate lp_feasible(const LinearProgram& lp);
ExactCertificate lp_feasible_exact(const LinearProgram& lp);
FeasibilityCertificate lp_feasible(const LinearProgram& lp, Arithmetic arithmetic);

/// Largest constraint violation of a certificate. For a feasible witness this
/// is max(|A x - b|, -x_nonneg); for a Farkas functional scaled to y.b = 1 it
/// is max(y.A_nonneg, |y.A_free|), and +inf when y.b <= 0.
double certificate_violation(const LinearProgram& lp, const FeasibilityCertificate& cert);
bool certificate_holds(const LinearProgram& lp, const FeasibilityCertificate& cert, double tol = kLpTol);
/// Exact re-check over the rationals; the program data is read exactly.
bool certificate_holds_exact(const LinearProgram& lp, const ExactCertificate& cert);

struct HullIntersection {
  FeasibilityCertificate certificate;
  std::optional<RealVector> point;
  bool intersect() const { return certificate.feasible(); }
};

/// Decides conv(U) ∩ conv(V) ≠ ∅ in the real coordinates of the polytopes.
HullIntersection hulls_intersect(const Polytope& u, const Polytope& v,
                                 Arithmetic arithmetic = Arithmetic::floating);

struct KirchbergerVerdict {
  bool separated = true;
  /// On failure: indices into U and V of a (k+2)-subset whose parts' hulls meet.
  std::vector<std::size_t> u_indices;
  std::vector<std::size_t> v_indices;
};

/// Tests every (k+2)-point subset S of U ∪ V for conv(S∩U) ∩ conv(S∩V) = ∅.
KirchbergerVerdict kirchberger_separated(std::span<const RealVector> u, std::span<const RealVector> v,
                                         std::size_t k, Arithmetic arithmetic = Arithmetic::floating);

/// <z, normal> = value, Hermitian; the normal need not be unit.
struct ComplexEquation {
  ComplexVector normal;
  Complex value;
};

struct FlatMeeting {
  FeasibilityCertificate certificate;
  std::optional<ComplexVector> point;
  bool meets() const { return certificate.feasible(); }
};

FlatMeeting flat_meets_polytope(std::span<const ComplexEquation> equations, const Polytope& polytope,
                                Arithmetic arithmetic = Arithmetic::floating);

struct CommonPoint {
  FeasibilityCertificate certificate;
  std::optional<RealVector> point;
  bool exists() const { return certificate.feasible(); }
};

/// Decides whether all sets of a family share a point, in real coordinates.
CommonPoint common_point(const Family& family, Arithmetic arithmetic = Arithmetic::floating);

struct ConeZero {
  FeasibilityCertificate certificate;
  /// Per group: total weight and the individual generator weights.
  RealVector group_weights;
  std::vector<RealVector> weights;
  bool found() const { return certificate.feasible(); }
};

/// Looks for lambda >= 0, sum lambda = 1, sum lambda_g g = 0 over all generators.
ConeZero nontrivial_zero_in_cone(const std::vector<std::vector<RealVector>>& groups,
                                 Arithmetic arithmetic = Arithmetic::floating);

/// Builds the cone program itself; used by exact re-checks.
LinearProgram cone_program(const std::vector<std::vector<RealVector>>& groups);

}  // namespace tvlab
