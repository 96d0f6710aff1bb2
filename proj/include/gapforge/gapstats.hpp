#ifndef GAPFORGE_GAPSTATS_HPP
#define GAPFORGE_GAPSTATS_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "gapforge/constants.hpp"
#include "gapforge/correlations.hpp"
#include "gapforge/ensembles.hpp"

namespace gapforge {

struct GapRecord {
  double rescaled_gap = 0.0;  // n^{(beta+2)/(beta+1)} (lambda_{i+1} - lambda_i)
  double raw_gap = 0.0;
  double location = 0.0;      // lambda_i
};

// Consecutive gaps whose left endpoint lies in (-2+eps, 2-eps).
std::vector<GapRecord> extract_gaps(const Spectrum& s, double epsilon = kDefaultBulkEpsilon);

struct GapLawSpec {
  int beta = 2;
  int k = 1;
  std::pair<double, double> interval{-2.0 + kDefaultBulkEpsilon, 2.0 - kDefaultBulkEpsilon};
  Window window{{{0.0, 1.0}}};
};

void validate(const GapLawSpec& spec);

// int_I (2 pi rho_sc(x))^{beta+2} dx.
double bulk_weight(int beta, std::pair<double, double> interval);

// (1/c_beta) int_A u^beta du * int_I (2 pi rho_sc)^{beta+2} dx.
double theoretical_intensity(const GapLawSpec& spec);

// 1 - exp(-x^{beta+1}) sum_{j<k} x^{(beta+1) j} / j!.
double tau_k_cdf(int beta, int k, double x);
double tau_k_density(int beta, int k, double x);

// ((1/((beta+1) c_beta)) int_I (2 pi rho_sc)^{beta+2})^{1/(beta+1)}.
double tau_normalization(int beta, std::pair<double, double> interval);

// tau_k for one draw from the k-th smallest raw gap with left endpoint in I;
// nullopt when fewer than k gaps fall in I.
std::optional<double> tau_k_normalize(const std::vector<GapRecord>& records, int n, const GapLawSpec& spec);

// Number of records with location in I and rescaled gap in A.
int count_in_window(const std::vector<GapRecord>& records, const GapLawSpec& spec);

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

struct PoissonTestResult {
  double chi2 = 0.0;
  int dof = 0;
  double p_value = 1.0;
  std::vector<int> observed;    // after pooling
  std::vector<double> expected;
};

// Pearson chi-square against Poisson(mu) on bins {0,1,2,>=3}; tail bins with
// expected count below 5 are pooled into their left neighbour.
PoissonTestResult poisson_count_test(const std::vector<int>& counts, double mu);

}  // namespace gapforge

#endif
