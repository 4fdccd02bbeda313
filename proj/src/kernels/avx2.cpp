// Compiled with -mavx2 -mfma when the compiler targets x86-64. Only reached
// through the dispatcher after a runtime CPU check.

#include <algorithm>
#include <cmath>
#include <limits>

#include "tvlab/kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>
#define TVLAB_HAVE_AVX2 1
#else
#define TVLAB_HAVE_AVX2 0
#endif

namespace tvlab::kernels::avx2 {

#if TVLAB_HAVE_AVX2

bool compiled() { return true; }

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// (e1 + e3) - (e0 + e2)
inline double odd_minus_even(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_sub_sd(_mm_unpackhi_pd(s, s), s));
}

}  // namespace

void project_coefficients(std::span<const double> vertices, std::span<const Complex> direction,
                          std::span<Complex> out) {
  const std::size_t dim = direction.size();
  const std::size_t pairs = dim / 2;
  const auto* x = reinterpret_cast<const double*>(direction.data());

  // Lanes hold (xr0, xi0, xr1, xi1) and the pair-swapped (xi0, xr0, xi1, xr1).
  constexpr std::size_t kMaxPairs = 16;
  __m256d xs[kMaxPairs];
  __m256d xw[kMaxPairs];
  const bool cached = pairs <= kMaxPairs;
  if (cached) {
    for (std::size_t p = 0; p < pairs; ++p) {
      xs[p] = _mm256_loadu_pd(x + 4 * p);
      xw[p] = _mm256_permute_pd(xs[p], 0b0101);
    }
  }

  for (std::size_t k = 0; k < out.size(); ++k) {
    const double* v = vertices.data() + 2 * dim * k;
    __m256d acc_re = _mm256_setzero_pd();
    __m256d acc_im = _mm256_setzero_pd();
    for (std::size_t p = 0; p < pairs; ++p) {
      const __m256d vv = _mm256_loadu_pd(v + 4 * p);
      const __m256d a = cached ? xs[p] : _mm256_loadu_pd(x + 4 * p);
      const __m256d b = cached ? xw[p] : _mm256_permute_pd(a, 0b0101);
      acc_re = _mm256_fmadd_pd(vv, a, acc_re);
      acc_im = _mm256_fmadd_pd(vv, b, acc_im);
    }
    double re = hsum(acc_re);
    double im = odd_minus_even(acc_im);
    if (dim % 2 == 1) {
      const std::size_t i = dim - 1;
      const double vr = v[2 * i];
      const double vi = v[2 * i + 1];
      const double xr = x[2 * i];
      const double xi = x[2 * i + 1];
      re += vr * xr + vi * xi;
      im += vi * xr - vr * xi;
    }
    out[k] = {re, im};
  }
}

Interval support_interval(std::span<const double> vertices, std::span<const double> u) {
  const std::size_t dim = u.size();
  Interval out{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  if (dim == 0) return out;
  const std::size_t count = vertices.size() / dim;
  const double* base = vertices.data();

  // Four vertices per step, one lane each.
  const __m256i stride = _mm256_set_epi64x(3 * static_cast<long long>(dim),
                                           2 * static_cast<long long>(dim),
                                           static_cast<long long>(dim), 0);
  __m256d lo = _mm256_set1_pd(std::numeric_limits<double>::infinity());
  __m256d hi = _mm256_set1_pd(-std::numeric_limits<double>::infinity());
  std::size_t k = 0;
  for (; k + 4 <= count; k += 4) {
    const double* blk = base + k * dim;
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t i = 0; i < dim; ++i) {
      const __m256d col = _mm256_i64gather_pd(blk + i, stride, 8);
      acc = _mm256_fmadd_pd(_mm256_set1_pd(u[i]), col, acc);
    }
    lo = _mm256_min_pd(lo, acc);
    hi = _mm256_max_pd(hi, acc);
  }
  alignas(32) double lbuf[4];
  alignas(32) double hbuf[4];
  _mm256_store_pd(lbuf, lo);
  _mm256_store_pd(hbuf, hi);
  for (int j = 0; j < 4; ++j) {
    out.lo = std::min(out.lo, lbuf[j]);
    out.hi = std::max(out.hi, hbuf[j]);
  }
  for (; k < count; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < dim; ++i) s = std::fma(u[i], base[k * dim + i], s);
    out.lo = std::min(out.lo, s);
    out.hi = std::max(out.hi, s);
  }
  return out;
}

#else

bool compiled() { return false; }

void project_coefficients(std::span<const double> vertices, std::span<const Complex> direction,
                          std::span<Complex> out) {
  scalar::project_coefficients(vertices, direction, out);
}

Interval support_interval(std::span<const double> vertices, std::span<const double> u) {
  return scalar::support_interval(vertices, u);
}

#endif

}  // namespace tvlab::kernels::avx2
