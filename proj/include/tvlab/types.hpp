#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace tvlab {

using Complex = std::complex<double>;
using RealVector = std::vector<double>;
using ComplexVector = std::vector<Complex>;

enum class Ambient { real, complex };

std::string to_string(Ambient ambient);
Ambient ambient_from_string(const std::string& name);

/// Operand dimensions disagree.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A sphere point lies within the pole guard, so no affine hyperplane in H
/// corresponds to it.
class PoleError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An objective was supplied and the program is unbounded in its direction.
class UnboundedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MalformedInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline void require_same_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": dimension " + std::to_string(a) +
                         " vs " + std::to_string(b));
  }
}

}  // namespace tvlab
