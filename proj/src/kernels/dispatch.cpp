#include <atomic>
#include <cstdlib>
#include <string>

#include "tvlab/kernels.hpp"

namespace tvlab::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa detect() {
  if (const char* forced = std::getenv("TVLAB_ISA")) {
    const std::string name(forced);
    if (name == "scalar") return Isa::scalar;
    if (name == "avx2" && isa_available(Isa::avx2)) return Isa::avx2;
  }
  return isa_available(Isa::avx2) ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

const char* isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool isa_available(Isa isa) {
  if (isa == Isa::scalar) return true;
  static const bool avx2_ok = avx2::compiled() && cpu_has_avx2();
  return avx2_ok;
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void set_isa(Isa isa) {
  if (!isa_available(isa)) {
    throw std::invalid_argument(std::string("instruction set not available: ") + isa_name(isa));
  }
  current().store(isa, std::memory_order_relaxed);
}

void project_coefficients(std::span<const double> vertices, std::span<const Complex> direction,
                          std::span<Complex> out) {
  if (vertices.size() != 2 * direction.size() * out.size()) {
    throw DimensionError("project_coefficients: vertex buffer does not match direction");
  }
  if (active_isa() == Isa::avx2) {
    avx2::project_coefficients(vertices, direction, out);
  } else {
    scalar::project_coefficients(vertices, direction, out);
  }
}

Interval support_interval(std::span<const double> vertices, std::span<const double> u) {
  if (u.empty() || vertices.size() % u.size() != 0) {
    throw DimensionError("support_interval: vertex buffer does not match direction");
  }
  return active_isa() == Isa::avx2 ? avx2::support_interval(vertices, u)
                                   : scalar::support_interval(vertices, u);
}

}  // namespace tvlab::kernels
