#pragma once

#include <array>
#include <optional>
#include <string>

#include "tvlab/geometry.hpp"
#include "tvlab/instance.hpp"

namespace tvlab {

struct PlotOptions {
  /// Real coordinates (indices into R^{2d} for complex instances) spanning the
  /// drawing plane. Required unless the sets already live in a plane.
  std::optional<std::array<std::size_t, 2>> axes;
  /// Transversal to draw; defaults to the planted one.
  std::optional<ComplexHyperplane> transversal;
  /// Adds the projected-polygon panel for this sphere point of C^{d+1}: the
  /// polygon of `panel_set`, the closest point p, a vector to a projected
  /// vertex and the line bounding the half-plane containing both.
  std::optional<SpherePoint> panel_direction;
  std::size_t panel_set = 0;
  double size = 480.0;
};

/// Deterministic SVG document. Throws MalformedInput for d >= 2 without axes
/// and for a panel direction of the wrong dimension.
std::string plot_instance(const Instance& instance, const PlotOptions& options = {});

}  // namespace tvlab
