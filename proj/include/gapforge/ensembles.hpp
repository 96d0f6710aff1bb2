#ifndef GAPFORGE_ENSEMBLES_HPP
#define GAPFORGE_ENSEMBLES_HPP

#include <cstdint>
#include <ostream>
#include <vector>

namespace gapforge {

struct EnsembleParams {
  int beta = 2;
  int n = 1;
  std::uint64_t seed = 0;
  std::uint64_t draw = 0;  // stream index; the generator key is seed ^ draw
};

void validate(const EnsembleParams& p);

struct TridiagonalMatrix {
  std::vector<double> diag;
  std::vector<double> offdiag;  // size n-1
};

// Sorted eigenvalues. Construction through make_spectrum rejects
// non-finite values and gaps below 1e-14.
struct Spectrum {
  std::vector<double> values;
  EnsembleParams params;
};

Spectrum make_spectrum(std::vector<double> values, const EnsembleParams& p);

// Hermite beta ensemble scaled to weight exp(-beta n lambda^2 / 4):
// diag N(0, 2/beta), offdiag chi_{beta(n-1)}, ..., chi_beta over sqrt(beta),
// all divided by sqrt(n).
TridiagonalMatrix sample_tridiagonal(const EnsembleParams& p);

// Implicit-shift QL, eigenvalues only, sorted ascending. Throws
// std::runtime_error after 50 sweeps without convergence on one eigenvalue.
std::vector<double> eigenvalues_tridiagonal(const TridiagonalMatrix& t);

// Number of eigenvalues strictly below x (Sturm sequence count).
int sturm_count(const TridiagonalMatrix& t, double x);

// All eigenvalues by bisection on the Sturm count.
std::vector<double> eigenvalues_bisection(const TridiagonalMatrix& t, double tol = 1e-14);

Spectrum sample_spectrum(const EnsembleParams& p);

// Dense draws for validation (n <= 64). GOE real symmetric, GUE complex
// Hermitian, GSE as the 2n x 2n complex realization of a quaternion
// self-dual matrix. Throws std::invalid_argument for n > 64.
// sample_dense_raw returns all eigenvalues (2n for GSE); sample_dense merges
// the Kramers pairs and throws std::runtime_error if a pair differs by more
// than 1e-8.
std::vector<double> sample_dense_raw(const EnsembleParams& p);
Spectrum sample_dense(const EnsembleParams& p);

// log Z_{beta,n} for the density with weight exp(-beta n lambda^2 / 4).
double selberg_log_z(int beta, int n);

// Rows: draw_index,rank,eigenvalue with 17 significant digits.
void write_spectra_csv(std::ostream& os, const std::vector<Spectrum>& spectra);

}  // namespace gapforge

#endif
