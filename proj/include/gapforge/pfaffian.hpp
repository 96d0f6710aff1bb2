#ifndef GAPFORGE_PFAFFIAN_HPP
#define GAPFORGE_PFAFFIAN_HPP

#include <Eigen/Dense>

namespace gapforge {

// Even-dimensional antisymmetric real matrix. Construction checks the
// antisymmetry defect against a relative tolerance and then stores the exact
// antisymmetric part.
class SkewMatrix {
 public:
  explicit SkewMatrix(int dim);
  explicit SkewMatrix(const Eigen::MatrixXd& m, double tol = 1e-13);

  int dim() const { return static_cast<int>(m_.rows()); }
  double operator()(int i, int j) const { return m_(i, j); }
  // Sets (i,j) and (j,i) together.
  void set(int i, int j, double v);
  const Eigen::MatrixXd& matrix() const { return m_; }
  // Principal submatrix on rows/columns [start, start+size).
  SkewMatrix block(int start, int size) const;

 private:
  Eigen::MatrixXd m_;
};

// Sum over canonical matchings of sgn(sigma) prod m(sigma_{2i-1}, sigma_{2i}).
// Throws std::invalid_argument for dim > 16.
double pfaffian_combinatorial(const SkewMatrix& m);

// Skew Gaussian elimination to tridiagonal form with partial pivoting.
double pfaffian_numeric(const SkewMatrix& m);

// A^T M A, antisymmetrized. Throws std::invalid_argument on dimension
// mismatch.
SkewMatrix congruence_transform(const SkewMatrix& m, const Eigen::MatrixXd& a);

}  // namespace gapforge

#endif
