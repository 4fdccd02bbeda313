#include "tvlab/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace tvlab::linalg {

namespace {

double conj_of(double v) { return v; }
Complex conj_of(Complex v) { return std::conj(v); }

template <class S>
void orthonormalize_impl(std::vector<std::vector<S>>& vectors, double drop) {
  std::vector<std::vector<S>> out;
  for (auto v : vectors) {
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : out) {
        S proj{};
        for (std::size_t i = 0; i < v.size(); ++i) proj += v[i] * conj_of(q[i]);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] -= proj * q[i];
      }
    }
    double n = 0.0;
    for (const auto& c : v) n += std::norm(c);
    n = std::sqrt(n);
    if (n <= drop) continue;
    for (auto& c : v) c /= n;
    out.push_back(std::move(v));
  }
  vectors = std::move(out);
}

template <class S>
std::vector<std::vector<S>> null_space_impl(std::vector<std::vector<S>> m, std::size_t cols,
                                            double threshold) {
  const std::size_t rows = m.size();
  for (const auto& r : m) require_same_dim(r.size(), cols, "null_space");
  double scale = 0.0;
  for (const auto& r : m) {
    for (const auto& c : r) scale = std::max(scale, std::abs(c));
  }
  const double tol = threshold * std::max(scale, 1.0);

  // perm[j] is the original column sitting at position j.
  std::vector<std::size_t> perm(cols);
  for (std::size_t j = 0; j < cols; ++j) perm[j] = j;
  std::size_t rank = 0;
  for (; rank < std::min(rows, cols); ++rank) {
    std::size_t pr = rank;
    std::size_t pc = rank;
    double best = -1.0;
    for (std::size_t i = rank; i < rows; ++i) {
      for (std::size_t j = rank; j < cols; ++j) {
        const double a = std::abs(m[i][j]);
        if (a > best) {
          best = a;
          pr = i;
          pc = j;
        }
      }
    }
    if (best <= tol) break;
    std::swap(m[rank], m[pr]);
    if (pc != rank) {
      for (auto& r : m) std::swap(r[rank], r[pc]);
      std::swap(perm[rank], perm[pc]);
    }
    const S inv = S(1) / m[rank][rank];
    for (std::size_t j = rank; j < cols; ++j) m[rank][j] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == rank) continue;
      const S f = m[i][rank];
      if (f == S(0)) continue;
      for (std::size_t j = rank; j < cols; ++j) m[i][j] -= f * m[rank][j];
    }
  }

  // Reduced form [I B]; each free column gives a basis vector (-B e_f, e_f).
  std::vector<std::vector<S>> basis;
  for (std::size_t f = rank; f < cols; ++f) {
    std::vector<S> v(cols, S(0));
    v[perm[f]] = S(1);
    for (std::size_t p = 0; p < rank; ++p) v[perm[p]] = -m[p][f];
    basis.push_back(std::move(v));
  }
  orthonormalize_impl(basis, 1e-14);
  return basis;
}

}  // namespace

std::vector<ComplexVector> null_space(const std::vector<ComplexVector>& rows, std::size_t cols,
                                      double threshold) {
  return null_space_impl(rows, cols, threshold);
}

std::vector<RealVector> null_space(const std::vector<RealVector>& rows, std::size_t cols, double threshold) {
  return null_space_impl(rows, cols, threshold);
}

void orthonormalize(std::vector<ComplexVector>& vectors, double drop) { orthonormalize_impl(vectors, drop); }
void orthonormalize(std::vector<RealVector>& vectors, double drop) { orthonormalize_impl(vectors, drop); }

std::vector<ComplexVector> complement_basis(const ComplexVector& v) {
  const std::size_t d = v.size();
  double n = 0.0;
  for (const auto& c : v) n += std::norm(c);
  if (!(n > 0.0)) throw MalformedInput("complement of a zero vector");
  // Skip the axis where v is largest; the rest together with v span C^d.
  std::vector<std::size_t> order(d);
  for (std::size_t i = 0; i < d; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return std::abs(v[a]) < std::abs(v[b]); });
  std::vector<ComplexVector> all;
  all.push_back(v);
  for (std::size_t k = 0; k + 1 < d; ++k) {
    ComplexVector e(d, Complex{0.0, 0.0});
    e[order[k]] = 1.0;
    all.push_back(std::move(e));
  }
  orthonormalize_impl(all, 0.0);
  all.erase(all.begin());
  return all;
}

}  // namespace tvlab::linalg
