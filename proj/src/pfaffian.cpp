#include "gapforge/pfaffian.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace gapforge {
namespace {

double defect_scale(const Eigen::MatrixXd& m) {
  return std::max(1.0, m.cwiseAbs().maxCoeff());
}

// Expansion along the smallest unused index; each branch is one canonical
// matching prefix. The sign of pairing i with j is (-1)^(unused indices
// strictly between i and j).
double expand(const Eigen::MatrixXd& m, unsigned used, int dim) {
  int i = 0;
  while (i < dim && (used & (1u << i))) ++i;
  if (i == dim) return 1.0;
  double total = 0.0;
  int between = 0;
  for (int j = i + 1; j < dim; ++j) {
    if (used & (1u << j)) continue;
    const double a = m(i, j);
    if (a != 0.0) {
      const double sub = expand(m, used | (1u << i) | (1u << j), dim);
      total += (between % 2 == 0 ? a : -a) * sub;
    }
    ++between;
  }
  return total;
}

}  // namespace

SkewMatrix::SkewMatrix(int dim) {
  if (dim <= 0 || dim % 2 != 0) {
    throw std::invalid_argument("SkewMatrix: dimension must be even and positive");
  }
  m_ = Eigen::MatrixXd::Zero(dim, dim);
}

SkewMatrix::SkewMatrix(const Eigen::MatrixXd& m, double tol) {
  if (m.rows() != m.cols() || m.rows() <= 0 || m.rows() % 2 != 0) {
    throw std::invalid_argument("SkewMatrix: matrix must be square with even dimension");
  }
  const double defect = (m + m.transpose()).cwiseAbs().maxCoeff();
  if (defect > tol * defect_scale(m)) {
    throw std::invalid_argument("SkewMatrix: input is not antisymmetric");
  }
  m_ = 0.5 * (m - m.transpose());
}

void SkewMatrix::set(int i, int j, double v) {
  if (i == j) {
    if (v != 0.0) throw std::invalid_argument("SkewMatrix: diagonal must be zero");
    return;
  }
  m_(i, j) = v;
  m_(j, i) = -v;
}

SkewMatrix SkewMatrix::block(int start, int size) const {
  return SkewMatrix(Eigen::MatrixXd(m_.block(start, start, size, size)), 0.0);
}

double pfaffian_combinatorial(const SkewMatrix& m) {
  if (m.dim() > 16) {
    throw std::invalid_argument("pfaffian_combinatorial: dimension exceeds 16");
  }
  return expand(m.matrix(), 0u, m.dim());
}

double pfaffian_numeric(const SkewMatrix& m) {
  Eigen::MatrixXd a = m.matrix();
  const int n = m.dim();
  double pf = 1.0;
  for (int k = 0; k + 1 < n; k += 2) {
    int kp = k + 1;
    double best = std::abs(a(k + 1, k));
    for (int i = k + 2; i < n; ++i) {
      if (std::abs(a(i, k)) > best) {
        best = std::abs(a(i, k));
        kp = i;
      }
    }
    if (kp != k + 1) {
      a.row(k + 1).swap(a.row(kp));
      a.col(k + 1).swap(a.col(kp));
      pf = -pf;
    }
    if (std::abs(a(k + 1, k)) < 1e-300) return 0.0;
    pf *= a(k, k + 1);
    if (k + 2 < n) {
      const int rest = n - k - 2;
      const Eigen::VectorXd tau = a.row(k).tail(rest).transpose() / a(k, k + 1);
      const Eigen::VectorXd col = a.col(k + 1).tail(rest);
      a.bottomRightCorner(rest, rest) +=
          tau * col.transpose() - col * tau.transpose();
    }
  }
  return pf;
}

SkewMatrix congruence_transform(const SkewMatrix& m, const Eigen::MatrixXd& a) {
  if (a.rows() != m.dim() || a.cols() != m.dim()) {
    throw std::invalid_argument("congruence_transform: dimension mismatch");
  }
  const Eigen::MatrixXd r = a.transpose() * (m.matrix() * a);
  return SkewMatrix(r, 1e-13);
}

}  // namespace gapforge
