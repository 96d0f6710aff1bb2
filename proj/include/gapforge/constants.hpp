#ifndef GAPFORGE_CONSTANTS_HPP
#define GAPFORGE_CONSTANTS_HPP

#include <numbers>
#include <stdexcept>

namespace gapforge {

// Bulk interval (-2+eps, 2-eps).
constexpr double kDefaultBulkEpsilon = 0.1;

inline void require_beta(int beta) {
  if (beta != 1 && beta != 2 && beta != 4) {
    throw std::invalid_argument("beta must be 1, 2 or 4");
  }
}

// c_beta: 48 pi, 48 pi^2, 540 pi^2.
inline double gap_constant(int beta) {
  constexpr double pi = std::numbers::pi;
  require_beta(beta);
  if (beta == 1) return 48.0 * pi;
  if (beta == 2) return 48.0 * pi * pi;
  return 540.0 * pi * pi;
}

// Smallest-gap scaling exponent (beta+2)/(beta+1).
inline double gap_exponent(int beta) {
  require_beta(beta);
  return (beta + 2.0) / (beta + 1.0);
}

}  // namespace gapforge

#endif
