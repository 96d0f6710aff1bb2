#ifndef GAPFORGE_KERNELS_HPP
#define GAPFORGE_KERNELS_HPP

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "gapforge/constants.hpp"

namespace gapforge {

// epsilon(x) = sign(x)/2.
double half_sign(double x);

// phi_N(r x) and phi_{N-1}(r x) with x-derivatives of order 0..4.
struct CdPoint {
  double x = 0.0;
  double a[5] = {0, 0, 0, 0, 0};
  double b[5] = {0, 0, 0, 0, 0};
};

// K_N(x,y) = r sum_{i<N} phi_i(r x) phi_i(r y), r = sqrt(N), in
// Christoffel-Darboux form r (a(x) b(y) - a(y) b(x)) / (x - y).
class CdKernel {
 public:
  explicit CdKernel(int order);
  int order() const { return order_; }
  double scale() const { return r_; }
  CdPoint point(double x) const;
  double value(const CdPoint& p, const CdPoint& q) const;
  // d/dy K(x,y) at x = p.x, y = q.x.
  double dy(const CdPoint& p, const CdPoint& q) const;

 private:
  int order_;
  double r_;
};

// GUE kernel K_n^{(2)}(x,y).
double gue_kernel(int n, double x, double y);

struct KernelBundle {
  double s_xy = 0.0;
  double s_yx = 0.0;
  double v_xy = 0.0;
  double j_xy = 0.0;
};

struct GoeKernelBundle {
  double s1 = 0.0;     // S^(1)(x,y)
  double s1_yx = 0.0;  // S^(1)(y,x)
  double v1 = 0.0;
  double j1 = 0.0;
  double alpha_x = 0.0;
  double alpha_y = 0.0;
  double gamma_x = 0.0;
  double gamma_y = 0.0;
};

// GSE kernel at matrix size n, built on K_{2n}:
//   S(x,y) = K_{2n}(x,y)/2 - (n/2) phi_{2n}(r x) F(y),
//   F(y) = int_{r y}^inf phi_{2n-1},  r = sqrt(2n),
//   V(x,y) = -d/dy S(x,y),  J(x,y) = int_y^x S(t,y) dt.
class GseKernel {
 public:
  struct Point {
    CdPoint cd;
    double tail = 0.0;  // F(x)
  };

  explicit GseKernel(int n);
  int n() const { return n_; }
  Point point(double x) const;

  double s(const Point& p, const Point& q) const;
  double v(const Point& p, const Point& q) const;
  double ds_dx(const Point& p, const Point& q) const;
  // Antisymmetric by construction: the integral is always taken with the
  // larger argument as upper limit.
  double j(const Point& p, const Point& q) const;
  // int_{q.x}^{x} S(t, q.x) dt.
  double j_raw(double x, const Point& q) const;
  // int_x^y S(t, w) dt.
  double s_integral(double x, double y, const Point& w) const;
  KernelBundle bundle(const Point& p, const Point& q) const;
  KernelBundle operator()(double x, double y) const;

 private:
  int n_;
  CdKernel k_;
  double half_line_;  // int_0^inf phi_{2n-1}
};

KernelBundle gse_kernel(int n, double x, double y);

// GOE kernel at matrix size n:
//   S1(x,y) = K_n(x,y) + (n/2) phi_{n-1}(r x) E(y),  E(y) = (eps * phi_n)(r y),
//   V1 = -d/dy S1,
//   J1(x,y) = int eps(x-t) S1(t,y) dt - eps(x-y) + gamma(x) - gamma(y),
// with alpha, gamma nonzero only for odd n.
class GoeKernel {
 public:
  struct Point {
    CdPoint cd;
    double eps_n = 0.0;    // (eps * phi_n)(r x)
    double eps_nm1 = 0.0;  // (eps * phi_{n-1})(r x)
  };

  explicit GoeKernel(int n);
  int n() const { return n_; }
  Point point(double x) const;

  double s(const Point& p, const Point& q) const;
  double v(const Point& p, const Point& q) const;
  double ds_dx(const Point& p, const Point& q) const;
  double alpha(const Point& p) const;
  double gamma(const Point& p) const;
  double j(const Point& p, const Point& q) const;
  // J1 from its defining integral, without the antisymmetric ordering.
  double j_raw(const Point& p, const Point& q) const;
  // int eps(x - t) K_n(t, y) dt.
  double k_convolution(double x, const Point& q) const;
  double s_integral(double x, double y, const Point& w) const;
  GoeKernelBundle bundle(const Point& p, const Point& q) const;
  GoeKernelBundle operator()(double x, double y) const;

 private:
  double eps_transform(int m, double s, double full) const;

  int n_;
  CdKernel k_;
  double full_n_;
  double full_nm1_;
  double half_n_;
  double half_nm1_;
};

GoeKernelBundle goe_kernel(int n, double x, double y);

struct RescaledPoint {
  double x0 = 0.0;
  double u = 0.0;
  double v = 0.0;
};

// [[S^, V^], [J^, S^(y,x)]] at x = x0 + u/(n rho), y = x0 + v/(n rho). For
// beta = 1 the S entries include alpha. Throws std::invalid_argument when x0
// is outside (-2+eps, 2-eps), |u| or |v| exceed 1, or beta is not 1 or 4.
Eigen::Matrix2d rescaled_kernel(int n, int beta, const RescaledPoint& p,
                                double eps = kDefaultBulkEpsilon);
// Variants reusing a prepared kernel.
Eigen::Matrix2d rescaled_kernel(const GseKernel& k, const RescaledPoint& p,
                                double eps = kDefaultBulkEpsilon);
Eigen::Matrix2d rescaled_kernel(const GoeKernel& k, const RescaledPoint& p,
                                double eps = kDefaultBulkEpsilon);

// Limit of the rescaled kernel at (u, v).
Eigen::Matrix2d sine_limit_kernel(int beta, double u, double v);

// Entrywise |K^_n - K_limit|.
Eigen::Matrix2d sine_limit_deviation(int n, int beta, const RescaledPoint& p,
                                     double eps = kDefaultBulkEpsilon);
Eigen::Matrix2d sine_limit_deviation(const GseKernel& k, const RescaledPoint& p,
                                     double eps = kDefaultBulkEpsilon);
Eigen::Matrix2d sine_limit_deviation(const GoeKernel& k, const RescaledPoint& p,
                                     double eps = kDefaultBulkEpsilon);

// Max over samples of |quantity| / bound for each global kernel estimate.
struct BoundAudit {
  int n = 0;
  int beta = 0;
  double s4rough = 0.0;     // |S| / (min{1/d, n} + n^{1/2})
  double s4derough = 0.0;   // |d_x S| / (n min{1/d, n^2 d} + n^{3/2})
  double s4derough2 = 0.0;  // |V| / (n min{1/d, n^2 d} + n)
  double intbd = 0.0;       // |int_x^y S(t,w) dt| / log n, w in {x, y, 0}
};

BoundAudit kernel_bound_audit(int n, int beta,
                              const std::vector<std::pair<double, double>>& pairs,
                              double eps = kDefaultBulkEpsilon);

}  // namespace gapforge

#endif
