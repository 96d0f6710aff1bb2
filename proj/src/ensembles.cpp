#include "gapforge/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <iomanip>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "gapforge/constants.hpp"
#include "gapforge/rng.hpp"

namespace gapforge {

void validate(const EnsembleParams& p) {
  require_beta(p.beta);
  if (p.n < 1) throw std::invalid_argument("n must be >= 1");
}

Spectrum make_spectrum(std::vector<double> values, const EnsembleParams& p) {
  std::sort(values.begin(), values.end());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) throw std::runtime_error("spectrum: non-finite eigenvalue");
    if (i > 0 && values[i] - values[i - 1] < 1e-14)
      throw std::runtime_error("spectrum: duplicate eigenvalue at rank " + std::to_string(i));
  }
  return Spectrum{std::move(values), p};
}

namespace {

// Entries are O(1) after scaling, so the unguarded form cannot overflow.
inline double pythag(double a, double b) { return std::sqrt(a * a + b * b); }

double chi(Philox4x32& g, double dof) {
  std::gamma_distribution<double> gamma(dof / 2.0, 2.0);
  return std::sqrt(gamma(g));
}

}  // namespace

TridiagonalMatrix sample_tridiagonal(const EnsembleParams& p) {
  validate(p);
  Philox4x32 g = Philox4x32::for_draw(p.seed, p.draw);
  const double beta = p.beta;
  const double scale = 1.0 / std::sqrt(static_cast<double>(p.n));
  std::normal_distribution<double> normal(0.0, std::sqrt(2.0 / beta));
  TridiagonalMatrix t;
  t.diag.resize(p.n);
  t.offdiag.resize(p.n - 1);
  for (int i = 0; i < p.n; ++i) t.diag[i] = normal(g) * scale;
  for (int i = 0; i + 1 < p.n; ++i) {
    double v = 0.0;
    // chi is positive almost surely; redraw the measure-zero zero case.
    while (v <= 0.0) v = chi(g, beta * (p.n - 1 - i)) / std::sqrt(beta);
    t.offdiag[i] = v * scale;
  }
  return t;
}

std::vector<double> eigenvalues_tridiagonal(const TridiagonalMatrix& t) {
  const int n = static_cast<int>(t.diag.size());
  if (n == 0) return {};
  if (static_cast<int>(t.offdiag.size()) != n - 1) throw std::invalid_argument("tridiagonal: offdiag size");
  std::vector<double> d = t.diag;
  std::vector<double> e(n, 0.0);
  std::copy(t.offdiag.begin(), t.offdiag.end(), e.begin());
  constexpr double eps = std::numeric_limits<double>::epsilon();
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
        if (std::fabs(e[m]) <= eps * dd) break;
      }
      if (m != l) {
        if (++iter > 50) throw std::runtime_error("tridiagonal QL: no convergence");
        // Wilkinson shift from the leading 2x2.
        double gq = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = pythag(gq, 1.0);
        gq = d[m] - d[l] + e[l] / (gq + std::copysign(r, gq));
        double s = 1.0, c = 1.0, pp = 0.0;
        int i;
        for (i = m - 1; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = pythag(f, gq);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= pp;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = gq / r;
          gq = d[i + 1] - pp;
          r = (d[i] - gq) * s + 2.0 * c * b;
          pp = s * r;
          d[i + 1] = gq + pp;
          gq = c * r - b;
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= pp;
        e[l] = gq;
        e[m] = 0.0;
      }
    } while (m != l);
  }
  std::sort(d.begin(), d.end());
  return d;
}

int sturm_count(const TridiagonalMatrix& t, double x) {
  const int n = static_cast<int>(t.diag.size());
  int count = 0;
  double q = 1.0;
  for (int i = 0; i < n; ++i) {
    const double b2 = i == 0 ? 0.0 : t.offdiag[i - 1] * t.offdiag[i - 1];
    q = t.diag[i] - x - (i == 0 ? 0.0 : b2 / q);
    if (q == 0.0) q = -std::numeric_limits<double>::epsilon() * (std::fabs(x) + 1.0);
    if (q < 0.0) ++count;
  }
  return count;
}

std::vector<double> eigenvalues_bisection(const TridiagonalMatrix& t, double tol) {
  const int n = static_cast<int>(t.diag.size());
  // Gershgorin bounds.
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (int i = 0; i < n; ++i) {
    const double r = (i > 0 ? std::fabs(t.offdiag[i - 1]) : 0.0) + (i + 1 < n ? std::fabs(t.offdiag[i]) : 0.0);
    lo = std::min(lo, t.diag[i] - r);
    hi = std::max(hi, t.diag[i] + r);
  }
  std::vector<double> out(n);
  for (int k = 0; k < n; ++k) {
    double a = lo, b = hi;
    while (b - a > tol * std::max(1.0, std::fabs(a) + std::fabs(b))) {
      const double mid = 0.5 * (a + b);
      if (mid <= a || mid >= b) break;
      if (sturm_count(t, mid) > k)
        b = mid;
      else
        a = mid;
    }
    out[k] = 0.5 * (a + b);
  }
  return out;
}

Spectrum sample_spectrum(const EnsembleParams& p) {
  return make_spectrum(eigenvalues_tridiagonal(sample_tridiagonal(p)), p);
}

std::vector<double> sample_dense_raw(const EnsembleParams& p) {
  validate(p);
  if (p.n > 64) throw std::invalid_argument("sample_dense: n must be <= 64");
  Philox4x32 g = Philox4x32::for_draw(p.seed, p.draw);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int n = p.n;
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  std::vector<double> ev;
  if (p.beta == 1) {
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = normal(g);
    const Eigen::MatrixXd h = (a + a.transpose()) / std::sqrt(2.0) * scale;
    const Eigen::VectorXd v = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(h, Eigen::EigenvaluesOnly).eigenvalues();
    ev.assign(v.data(), v.data() + v.size());
  } else if (p.beta == 2) {
    Eigen::MatrixXcd h(n, n);
    const double s = std::sqrt(0.5);
    for (int i = 0; i < n; ++i) {
      h(i, i) = normal(g);
      for (int j = i + 1; j < n; ++j) {
        const std::complex<double> z(normal(g) * s, normal(g) * s);
        h(i, j) = z;
        h(j, i) = std::conj(z);
      }
    }
    h *= scale;
    const Eigen::VectorXd v = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(h, Eigen::EigenvaluesOnly).eigenvalues();
    ev.assign(v.data(), v.data() + v.size());
  } else {
    // [[A, B], [-conj(B), conj(A)]], A Hermitian, B antisymmetric.
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n), b = Eigen::MatrixXcd::Zero(n, n);
    const double s = 0.5;  // per real component, so E|.|^2 = 1/2
    for (int i = 0; i < n; ++i) {
      a(i, i) = normal(g) * std::sqrt(0.5);
      for (int j = i + 1; j < n; ++j) {
        const std::complex<double> z(normal(g) * s, normal(g) * s);
        a(i, j) = z;
        a(j, i) = std::conj(z);
        const std::complex<double> w(normal(g) * s, normal(g) * s);
        b(i, j) = w;
        b(j, i) = -w;
      }
    }
    Eigen::MatrixXcd h(2 * n, 2 * n);
    h.topLeftCorner(n, n) = a;
    h.topRightCorner(n, n) = b;
    h.bottomLeftCorner(n, n) = -b.conjugate();
    h.bottomRightCorner(n, n) = a.conjugate();
    h *= scale;
    const Eigen::VectorXd v = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(h, Eigen::EigenvaluesOnly).eigenvalues();
    ev.assign(v.data(), v.data() + v.size());
  }
  std::sort(ev.begin(), ev.end());
  return ev;
}

Spectrum sample_dense(const EnsembleParams& p) {
  std::vector<double> raw = sample_dense_raw(p);
  if (p.beta != 4) return make_spectrum(std::move(raw), p);
  std::vector<double> merged(p.n);
  for (int i = 0; i < p.n; ++i) {
    const double x = raw[2 * i], y = raw[2 * i + 1];
    if (std::fabs(x - y) > 1e-8) throw std::runtime_error("sample_dense: Kramers pair split");
    merged[i] = 0.5 * (x + y);
  }
  return make_spectrum(std::move(merged), p);
}

double selberg_log_z(int beta, int n) {
  require_beta(beta);
  if (n < 1) throw std::invalid_argument("selberg_log_z: n must be >= 1");
  const double b = beta, m = n;
  double out = 0.5 * m * std::log(2.0 * std::numbers::pi) +
               (-m * (m - 1.0) * b / 4.0 - m / 2.0) * std::log(b * m / 2.0);
  for (int j = 1; j <= n; ++j) out += std::lgamma(1.0 + j * b / 2.0) - std::lgamma(1.0 + b / 2.0);
  return out;
}

void write_spectra_csv(std::ostream& os, const std::vector<Spectrum>& spectra) {
  os << "draw_index,rank,eigenvalue\n";
  const auto old = os.precision(17);
  for (const auto& s : spectra)
    for (std::size_t r = 0; r < s.values.size(); ++r) os << s.params.draw << ',' << r + 1 << ',' << s.values[r] << '\n';
  os.precision(old);
}

}  // namespace gapforge
