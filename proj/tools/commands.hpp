#ifndef GAPFORGE_TOOLS_COMMANDS_HPP
#define GAPFORGE_TOOLS_COMMANDS_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace gapforge::cli {

constexpr int kSchemaVersion = 1;

enum ExitCode { kOk = 0, kVerificationFailure = 1, kUsageError = 2 };

struct RunConfig {
  std::string command;
  int beta = 4;
  std::vector<int> n;
  int trials = 0;
  std::uint64_t seed = 0;
  double epsilon = 0.1;
  int k = 1;
  std::string which;
  std::string grid;
  std::string out = ".";
  std::string format = "csv";
};

// Max deviations from the sine-kernel limit over x0 and a uniform (u,v) grid
// on [-1,1]^2. dev_j_rel divides the J deviation by |u-v| (u != v).
struct KernelLimitRow {
  int n = 0;
  double dev_s = 0.0;
  double dev_s_yx = 0.0;
  double dev_v = 0.0;
  double dev_j = 0.0;
  double dev_j_rel = 0.0;
};

KernelLimitRow kernel_limit_scan(int beta, int n, int grid, const std::vector<double>& x0s, double epsilon);

// Pf M_ii / (n rho(lambda))^2 at x = lambda + u / (n rho(lambda)).
struct CorrelationRow {
  int n = 0;
  double u = 0.0;
  double pfaffian = 0.0;
  double scaled = 0.0;
  double limit = 0.0;
  double ratio = 0.0;
};

std::vector<CorrelationRow> correlation_scan(int beta, int n, double lambda, const std::vector<double>& us);

// Least-squares fit of the scaled density on small u to c u^p + d u^{p+2}
// (p = beta); returns c.
double small_u_coefficient(int beta, int n, double lambda, const std::vector<double>& us);

// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

struct SampleGapsResult {
  int beta = 0;
  int n = 0;
  int trials = 0;
  int k = 1;
  double epsilon = 0.1;
  std::vector<int> draws_with_tau;
  std::vector<double> tau;
  std::vector<int> counts;  // per draw, in A x I with A = (0,1]
  int skipped = 0;
  double ks = 0.0;
  double mu_theory = 0.0;
  double mu_empirical = 0.0;
  double p_poisson = 1.0;
  double chi2 = 0.0;
  int dof = 0;
};

SampleGapsResult run_sample_gaps(int beta, int n, int trials, std::uint64_t seed, double epsilon, int k,
                                 int threads = 0);

// Parses argv and dispatches; returns an ExitCode value.
int run(int argc, char** argv);

}  // namespace gapforge::cli

#endif
