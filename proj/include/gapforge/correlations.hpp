#ifndef GAPFORGE_CORRELATIONS_HPP
#define GAPFORGE_CORRELATIONS_HPP

#include <utility>
#include <vector>

#include "gapforge/constants.hpp"
#include "gapforge/kernels.hpp"
#include "gapforge/pfaffian.hpp"

namespace gapforge {

struct GapConfiguration {
  int beta = 4;  // 1 or 4
  int n = 0;
  std::vector<std::pair<double, double>> pairs;  // (lambda_i, x_i)
  double epsilon = kDefaultBulkEpsilon;
};

struct CorrelationValue {
  double total = 0.0;
  double diag_part = 0.0;
  double offdiag_part = 0.0;
};

// Finite union of intervals (a_i, b_i] inside (0, inf).
struct Window {
  std::vector<std::pair<double, double>> intervals;
  double measure() const;
  // int_A u^p du.
  double moment(double p) const;
};

enum class PfaffianPath { kNumeric, kCombinatorial };

// Points in the order lambda_1, x_1, ..., lambda_k, x_k, extras...
std::vector<double> configuration_points(const GapConfiguration& cfg,
                                         const std::vector<double>& extras);

// Sizes of the diagonal blocks: 4 per pair, extras appended to the last block.
std::vector<int> diagonal_block_sizes(const GapConfiguration& cfg,
                                      const std::vector<double>& extras);

// Matrix of 2x2 blocks JK(p_i, p_j) = [[J, S(p_j,p_i)], [-S(p_i,p_j), -V]].
// Throws std::invalid_argument for points outside the bulk or beta not in
// {1, 4}.
SkewMatrix assemble_correlation_matrix(const GapConfiguration& cfg,
                                       const std::vector<double>& extras = {});

// Product of the Pfaffians of the diagonal blocks.
double pfaffian_diagonal_part(const SkewMatrix& m, const std::vector<int>& blocks);

CorrelationValue rho(const GapConfiguration& cfg,
                     const std::vector<double>& extras = {},
                     PfaffianPath path = PfaffianPath::kNumeric);

// S(l,l) S(x,x) - S(l,x) S(x,l) + J(l,x) V(l,x); for beta = 1 the S entries
// carry alpha.
double pf_mii_closed(int n, int beta, double lambda, double x);

// Sine-kernel limit of Pf M_ii / (n rho)^2 at rescaled gap u.
//   beta 4: 1 - K(2u)^2 + d/du[K(2u)] int_0^u K(2t) dt
//   beta 1: 1 - K(u)^2 + K'(u) (int_0^u K - 1/2)
//   beta 2: 1 - K(u)^2
double limiting_gap_density(int beta, double u);

// Round 1: within each 4-block, row/col 1 += (lambda - x) row/col 2, then
// rows/cols 3 -= 1 and 4 -= 2. Unit-determinant congruence.
SkewMatrix round1_transform(const SkewMatrix& m, const GapConfiguration& cfg);

// Round 2: entries with both indices odd (1-based) times n^e, both even
// times n^-e. Congruence by a unit-determinant diagonal matrix.
SkewMatrix round2_transform(const SkewMatrix& m, int n, double exponent);


// int over x_i in lambda_i + n^{-(beta+2)/(beta+1)} A of rho_{2k}, by a
// 64-point Gauss-Legendre rule per interval and axis. Requires k <= 2 and
// lambdas separated by at least 1/log n.
double l_kn_numeric(int n, int beta, int k, const std::vector<double>& lambdas,
                    const Window& window, double epsilon = kDefaultBulkEpsilon);

// Limit of l_kn_numeric: prod_i (int_A u^beta du / c_beta) (2 pi rho(lambda_i))^{beta+2}.
double l_kn_limit(int beta, const std::vector<double>& lambdas,
                  const Window& window);

}  // namespace gapforge

#endif
