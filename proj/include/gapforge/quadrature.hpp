#ifndef GAPFORGE_QUADRATURE_HPP
#define GAPFORGE_QUADRATURE_HPP

#include <functional>
#include <vector>

namespace gapforge {

struct QuadOptions {
  double abs_tol = 1e-12;
  double rel_tol = 0.0;
  // Uniform pre-split of [a,b]; useful for oscillatory integrands whose
  // wavelength is known.
  int initial_panels = 1;
  int max_panels = 20000;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  int panels = 0;
  bool converged = false;
};

// Globally adaptive 7/15-point Gauss-Kronrod integration of f over [a,b].
// Panels are bisected in order of decreasing error estimate until the summed
// estimate is below max(abs_tol, rel_tol*|I|).
QuadResult integrate(const std::function<double(double)>& f, double a,
                     double b, const QuadOptions& opt = {});

// Same, split at the given interior breakpoints (points outside (a,b) are
// ignored).
QuadResult integrate(const std::function<double(double)>& f, double a,
                     double b, std::vector<double> breakpoints,
                     const QuadOptions& opt = {});

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// n-point Gauss-Legendre rule on [-1,1].
GaussRule gauss_legendre(int n);

}  // namespace gapforge

#endif
