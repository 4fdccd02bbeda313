#include <algorithm>
#include <limits>

#include "tvlab/kernels.hpp"

namespace tvlab::kernels::scalar {

void project_coefficients(std::span<const double> vertices, std::span<const Complex> direction,
                          std::span<Complex> out) {
  const std::size_t dim = direction.size();
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double* v = vertices.data() + 2 * dim * k;
    double re = 0.0;
    double im = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      const double vr = v[2 * i];
      const double vi = v[2 * i + 1];
      const double xr = direction[i].real();
      const double xi = direction[i].imag();
      re += vr * xr + vi * xi;
      im += vi * xr - vr * xi;
    }
    out[k] = {re, im};
  }
}

Interval support_interval(std::span<const double> vertices, std::span<const double> u) {
  const std::size_t dim = u.size();
  Interval out{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (std::size_t k = 0; dim > 0 && k * dim < vertices.size(); ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < dim; ++i) s += u[i] * vertices[k * dim + i];
    out.lo = std::min(out.lo, s);
    out.hi = std::max(out.hi, s);
  }
  return out;
}

}  // namespace tvlab::kernels::scalar
