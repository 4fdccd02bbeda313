#pragma once

// Data-parallel inner loops. Each kernel has a portable scalar reference and an
// AVX2/FMA variant; the variant is chosen at runtime from CPU support and can be
// forced through set_isa() or the TVLAB_ISA environment variable
// ("scalar" | "avx2").

#include <span>

#include "tvlab/types.hpp"

namespace tvlab::kernels {

enum class Isa { scalar, avx2 };

const char* isa_name(Isa isa);
bool isa_available(Isa isa);
Isa active_isa();
/// Throws std::invalid_argument if the CPU lacks the requested extension.
void set_isa(Isa isa);

struct Interval {
  double lo;
  double hi;
};

/// out[k] = sum_i vertex_k[i] * conj(direction[i]).
/// `vertices` holds out.size() complex vectors of direction.size() entries,
/// interleaved as (re, im).
void project_coefficients(std::span<const double> vertices, std::span<const Complex> direction,
                          std::span<Complex> out);

/// min and max of u . v over the real vectors packed in `vertices`.
Interval support_interval(std::span<const double> vertices, std::span<const double> u);

namespace scalar {
void project_coefficients(std::span<const double> vertices, std::span<const Complex> direction,
                          std::span<Complex> out);
Interval support_interval(std::span<const double> vertices, std::span<const double> u);
}  // namespace scalar

namespace avx2 {
bool compiled();
void project_coefficients(std::span<const double> vertices, std::span<const Complex> direction,
                          std::span<Complex> out);
Interval support_interval(std::span<const double> vertices, std::span<const double> u);
}  // namespace avx2

}  // namespace tvlab::kernels
