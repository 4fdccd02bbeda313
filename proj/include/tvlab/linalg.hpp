#pragma once

#include <vector>

#include "tvlab/types.hpp"

namespace tvlab::linalg {

inline constexpr double kRankThreshold = 1e-10;

/// Orthonormal basis of {a : M a = 0} for a matrix given by rows with `cols`
/// columns. Gaussian elimination with complete pivoting; pivots below
/// threshold * max|M| count as zero.
std::vector<ComplexVector> null_space(const std::vector<ComplexVector>& rows, std::size_t cols,
                                      double threshold = kRankThreshold);
std::vector<RealVector> null_space(const std::vector<RealVector>& rows, std::size_t cols,
                                   double threshold = kRankThreshold);

/// Modified Gram-Schmidt under the Hermitian inner product; drops vectors
/// whose residual norm falls below `drop`.
void orthonormalize(std::vector<ComplexVector>& vectors, double drop = 1e-12);
void orthonormalize(std::vector<RealVector>& vectors, double drop = 1e-12);

/// Orthonormal basis of the Hermitian complement of a nonzero vector in C^d,
/// built deterministically from the standard basis.
std::vector<ComplexVector> complement_basis(const ComplexVector& v);

}  // namespace tvlab::linalg
