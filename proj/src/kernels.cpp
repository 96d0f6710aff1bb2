#include "gapforge/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <type_traits>

#include "gapforge/quadrature.hpp"
#include "gapforge/special_functions.hpp"

namespace gapforge {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kCoincidence = 1e-8;
// Derivative switch in units of 1/N: the ratio form loses eps/(N d) and the
// Taylor form (N d)^3.
constexpr double kDerivSwitch = 1e-4;
constexpr double kJTol = 1e-10;

QuadOptions oscillatory_options(double length, int order) {
  QuadOptions opt;
  opt.abs_tol = kJTol;
  // K_N(t, y) oscillates with period ~ 2 pi / N in t.
  opt.initial_panels = std::max(
      1, static_cast<int>(std::ceil(std::abs(length) * order / kPi)));
  return opt;
}

void check_bulk(double x, double eps, const char* who) {
  if (!(x > -2.0 + eps && x < 2.0 - eps)) {
    throw std::invalid_argument(std::string(who) + ": point outside the bulk");
  }
}

}  // namespace

double half_sign(double x) {
  if (x > 0.0) return 0.5;
  if (x < 0.0) return -0.5;
  return 0.0;
}

CdKernel::CdKernel(int order) : order_(order) {
  if (order < 1) throw std::invalid_argument("CdKernel: order must be >= 1");
  r_ = std::sqrt(static_cast<double>(order));
}

CdPoint CdKernel::point(double x) const {
  const WavePair w = hermite_wave_pair(order_, r_ * x);
  CdPoint p;
  p.x = x;
  double rk = 1.0;
  for (int k = 0; k < 5; ++k) {
    p.a[k] = w.top[k] * rk;
    p.b[k] = w.next[k] * rk;
    rk *= r_;
  }
  return p;
}

double CdKernel::value(const CdPoint& p, const CdPoint& q) const {
  const double h = q.x - p.x;
  if (std::abs(h) < kCoincidence) {
    // Expansion of g(y) = a(x) b(y) - a(y) b(x) about y = x.
    double g[4];
    for (int k = 1; k <= 3; ++k) g[k] = p.a[0] * p.b[k] - p.a[k] * p.b[0];
    return -r_ * (g[1] + g[2] * h / 2.0 + g[3] * h * h / 6.0);
  }
  return r_ * (p.a[0] * q.b[0] - q.a[0] * p.b[0]) / (p.x - q.x);
}

double CdKernel::dy(const CdPoint& p, const CdPoint& q) const {
  const double h = q.x - p.x;
  if (std::abs(h) * order_ < kDerivSwitch) {
    double g[5];
    for (int k = 2; k <= 4; ++k) g[k] = p.a[0] * p.b[k] - p.a[k] * p.b[0];
    return -r_ * (g[2] / 2.0 + g[3] * h / 3.0 + g[4] * h * h / 8.0);
  }
  const double d = p.x - q.x;
  const double g = p.a[0] * q.b[0] - q.a[0] * p.b[0];
  const double gy = p.a[0] * q.b[1] - q.a[1] * p.b[0];
  return r_ * (gy * d + g) / (d * d);
}

double gue_kernel(int n, double x, double y) {
  const CdKernel k(n);
  return k.value(k.point(x), k.point(y));
}

// ---------------------------------------------------------------- GSE

GseKernel::GseKernel(int n) : n_(n), k_(2 * std::max(n, 1)) {
  if (n < 1) throw std::invalid_argument("GseKernel: n must be >= 1");
  half_line_ = hermite_half_line_integral(2 * n - 1);
}

GseKernel::Point GseKernel::point(double x) const {
  Point p;
  p.cd = k_.point(x);
  const double s = k_.scale() * x;
  p.tail = half_line_ - hermite_partial_integral(2 * n_ - 1, 0.0, s);
  return p;
}

double GseKernel::s(const Point& p, const Point& q) const {
  return 0.5 * k_.value(p.cd, q.cd) - 0.5 * n_ * p.cd.a[0] * q.tail;
}

double GseKernel::v(const Point& p, const Point& q) const {
  return -0.5 * k_.dy(p.cd, q.cd) -
         0.5 * n_ * k_.scale() * p.cd.a[0] * q.cd.b[0];
}

double GseKernel::ds_dx(const Point& p, const Point& q) const {
  return 0.5 * k_.dy(q.cd, p.cd) - 0.5 * n_ * p.cd.a[1] * q.tail;
}

double GseKernel::s_integral(double x, double y, const Point& w) const {
  if (x == y) return 0.0;
  auto f = [&](double t) {
    const CdPoint c = k_.point(t);
    return 0.5 * k_.value(c, w.cd) - 0.5 * n_ * c.a[0] * w.tail;
  };
  return integrate(f, x, y, std::vector<double>{w.cd.x},
                   oscillatory_options(y - x, k_.order()))
      .value;
}

double GseKernel::j_raw(double x, const Point& q) const {
  return s_integral(q.cd.x, x, q);
}

double GseKernel::j(const Point& p, const Point& q) const {
  if (p.cd.x == q.cd.x) return 0.0;
  if (p.cd.x > q.cd.x) return j_raw(p.cd.x, q);
  return -j_raw(q.cd.x, p);
}

KernelBundle GseKernel::bundle(const Point& p, const Point& q) const {
  KernelBundle b;
  b.s_xy = s(p, q);
  b.s_yx = s(q, p);
  b.v_xy = v(p, q);
  b.j_xy = j(p, q);
  return b;
}

KernelBundle GseKernel::operator()(double x, double y) const {
  return bundle(point(x), point(y));
}

KernelBundle gse_kernel(int n, double x, double y) {
  return GseKernel(n)(x, y);
}

// ---------------------------------------------------------------- GOE

GoeKernel::GoeKernel(int n) : n_(n), k_(std::max(n, 1)) {
  if (n < 2) throw std::invalid_argument("GoeKernel: n must be >= 2");
  half_n_ = hermite_half_line_integral(n);
  half_nm1_ = hermite_half_line_integral(n - 1);
  full_n_ = n % 2 == 0 ? 2.0 * half_n_ : 0.0;
  full_nm1_ = (n - 1) % 2 == 0 ? 2.0 * half_nm1_ : 0.0;
}

double GoeKernel::eps_transform(int m, double s, double full) const {
  // (1/2)(int_{-inf}^s - int_s^inf) phi_m = full/2 - T_m(s).
  const double half = m == n_ ? half_n_ : half_nm1_;
  return 0.5 * full - half + hermite_partial_integral(m, 0.0, s);
}

GoeKernel::Point GoeKernel::point(double x) const {
  Point p;
  p.cd = k_.point(x);
  const double s = k_.scale() * x;
  p.eps_n = eps_transform(n_, s, full_n_);
  p.eps_nm1 = eps_transform(n_ - 1, s, full_nm1_);
  return p;
}

double GoeKernel::s(const Point& p, const Point& q) const {
  return k_.value(p.cd, q.cd) + 0.5 * n_ * p.cd.b[0] * q.eps_n;
}

double GoeKernel::v(const Point& p, const Point& q) const {
  return -k_.dy(p.cd, q.cd) - 0.5 * n_ * k_.scale() * p.cd.b[0] * q.cd.a[0];
}

double GoeKernel::ds_dx(const Point& p, const Point& q) const {
  return k_.dy(q.cd, p.cd) + 0.5 * n_ * p.cd.b[1] * q.eps_n;
}

double GoeKernel::alpha(const Point& p) const {
  if (n_ % 2 == 0) return 0.0;
  return k_.scale() * p.cd.b[0] / full_nm1_;
}

double GoeKernel::gamma(const Point& p) const {
  if (n_ % 2 == 0) return 0.0;
  return p.eps_nm1 / full_nm1_;
}

double GoeKernel::k_convolution(double x, const Point& q) const {
  const double lim = hermite_cutoff(n_) / k_.scale();
  auto f = [&](double t) { return k_.value(k_.point(t), q.cd); };
  const double y = q.cd.x;
  double left = 0.0, right = 0.0;
  if (x > -lim) {
    left = integrate(f, -lim, std::min(x, lim), std::vector<double>{y},
                     oscillatory_options(std::min(x, lim) + lim, n_))
               .value;
  }
  if (x < lim) {
    right = integrate(f, std::max(x, -lim), lim, std::vector<double>{y},
                      oscillatory_options(lim - std::max(x, -lim), n_))
                .value;
  }
  return 0.5 * (left - right);
}

double GoeKernel::j_raw(const Point& p, const Point& q) const {
  const double x = p.cd.x, y = q.cd.x;
  const double conv_phi = p.eps_nm1 / k_.scale();  // int eps(x-t) phi_{n-1}(r t) dt
  return k_convolution(x, q) + 0.5 * n_ * q.eps_n * conv_phi - half_sign(x - y) +
         gamma(p) - gamma(q);
}

double GoeKernel::j(const Point& p, const Point& q) const {
  if (p.cd.x == q.cd.x) return 0.0;
  if (p.cd.x > q.cd.x) return j_raw(p, q);
  return -j_raw(q, p);
}

double GoeKernel::s_integral(double x, double y, const Point& w) const {
  if (x == y) return 0.0;
  auto f = [&](double t) {
    const CdPoint c = k_.point(t);
    return k_.value(c, w.cd) + 0.5 * n_ * c.b[0] * w.eps_n;
  };
  return integrate(f, x, y, std::vector<double>{w.cd.x},
                   oscillatory_options(y - x, n_))
      .value;
}

GoeKernelBundle GoeKernel::bundle(const Point& p, const Point& q) const {
  GoeKernelBundle b;
  b.s1 = s(p, q);
  b.s1_yx = s(q, p);
  b.v1 = v(p, q);
  b.j1 = j(p, q);
  b.alpha_x = alpha(p);
  b.alpha_y = alpha(q);
  b.gamma_x = gamma(p);
  b.gamma_y = gamma(q);
  return b;
}

GoeKernelBundle GoeKernel::operator()(double x, double y) const {
  return bundle(point(x), point(y));
}

GoeKernelBundle goe_kernel(int n, double x, double y) {
  return GoeKernel(n)(x, y);
}

// ---------------------------------------------------------------- rescaling

namespace {

struct Local {
  double x, y, c;
};

Local localize(int n, const RescaledPoint& p, double eps) {
  check_bulk(p.x0, eps, "rescaled_kernel");
  if (std::abs(p.u) > 1.0 || std::abs(p.v) > 1.0) {
    throw std::invalid_argument("rescaled_kernel: |u|, |v| must be <= 1");
  }
  const double c = n * semicircle(p.x0);
  return {p.x0 + p.u / c, p.x0 + p.v / c, c};
}

}  // namespace

Eigen::Matrix2d rescaled_kernel(const GseKernel& k, const RescaledPoint& p,
                                double eps) {
  const Local l = localize(k.n(), p, eps);
  const auto px = k.point(l.x), py = k.point(l.y);
  const KernelBundle b = k.bundle(px, py);
  Eigen::Matrix2d m;
  m << b.s_xy / l.c, b.v_xy / (l.c * l.c), b.j_xy, b.s_yx / l.c;
  return m;
}

Eigen::Matrix2d rescaled_kernel(const GoeKernel& k, const RescaledPoint& p,
                                double eps) {
  const Local l = localize(k.n(), p, eps);
  const auto px = k.point(l.x), py = k.point(l.y);
  const GoeKernelBundle b = k.bundle(px, py);
  Eigen::Matrix2d m;
  m << (b.s1 + b.alpha_x) / l.c, b.v1 / (l.c * l.c), b.j1,
      (b.s1_yx + b.alpha_y) / l.c;
  return m;
}

Eigen::Matrix2d rescaled_kernel(int n, int beta, const RescaledPoint& p,
                                double eps) {
  if (beta == 4) return rescaled_kernel(GseKernel(n), p, eps);
  if (beta == 1) return rescaled_kernel(GoeKernel(n), p, eps);
  throw std::invalid_argument("rescaled_kernel: beta must be 1 or 4");
}

Eigen::Matrix2d sine_limit_kernel(int beta, double u, double v) {
  const double d = u - v;
  Eigen::Matrix2d m;
  if (beta == 4) {
    const double k = sine_kernel(2.0 * d);
    m << k, 2.0 * sine_kernel_deriv(2.0 * d), 0.5 * sine_kernel_integral(2.0 * d),
        k;
  } else if (beta == 1) {
    const double k = sine_kernel(d);
    m << k, sine_kernel_deriv(d), sine_kernel_integral(d) - half_sign(d), k;
  } else {
    throw std::invalid_argument("sine_limit_kernel: beta must be 1 or 4");
  }
  return m;
}

Eigen::Matrix2d sine_limit_deviation(const GseKernel& k, const RescaledPoint& p,
                                     double eps) {
  return (rescaled_kernel(k, p, eps) - sine_limit_kernel(4, p.u, p.v)).cwiseAbs();
}

Eigen::Matrix2d sine_limit_deviation(const GoeKernel& k, const RescaledPoint& p,
                                     double eps) {
  return (rescaled_kernel(k, p, eps) - sine_limit_kernel(1, p.u, p.v)).cwiseAbs();
}

Eigen::Matrix2d sine_limit_deviation(int n, int beta, const RescaledPoint& p,
                                     double eps) {
  if (beta == 4) return sine_limit_deviation(GseKernel(n), p, eps);
  if (beta == 1) return sine_limit_deviation(GoeKernel(n), p, eps);
  throw std::invalid_argument("sine_limit_deviation: beta must be 1 or 4");
}

// ---------------------------------------------------------------- audit

namespace {

template <class Kernel>
BoundAudit audit_impl(const Kernel& k, int beta,
                      const std::vector<std::pair<double, double>>& pairs,
                      double eps) {
  BoundAudit out;
  out.n = k.n();
  out.beta = beta;
  const double n = k.n();
  const double logn = std::log(n);
  const auto origin = k.point(0.0);
  for (const auto& [x, y] : pairs) {
    check_bulk(x, eps, "kernel_bound_audit");
    check_bulk(y, eps, "kernel_bound_audit");
    const auto px = k.point(x), py = k.point(y);
    const double d = std::abs(x - y);
    const double inv_d = d > 0.0 ? 1.0 / d : INFINITY;
    double sxy = k.s(px, py);
    if constexpr (std::is_same_v<Kernel, GoeKernel>) sxy += k.alpha(px);
    out.s4rough = std::max(
        out.s4rough, std::abs(sxy) / (std::min(inv_d, n) + std::sqrt(n)));
    const double mix = n * std::min(inv_d, n * n * d);
    out.s4derough = std::max(out.s4derough, std::abs(k.ds_dx(px, py)) /
                                                (mix + std::pow(n, 1.5)));
    out.s4derough2 =
        std::max(out.s4derough2, std::abs(k.v(px, py)) / (mix + n));
    for (const auto* w : {&px, &py, &origin}) {
      out.intbd =
          std::max(out.intbd, std::abs(k.s_integral(x, y, *w)) / logn);
    }
  }
  return out;
}

}  // namespace

BoundAudit kernel_bound_audit(int n, int beta,
                              const std::vector<std::pair<double, double>>& pairs,
                              double eps) {
  if (beta == 4) return audit_impl(GseKernel(n), 4, pairs, eps);
  if (beta == 1) return audit_impl(GoeKernel(n), 1, pairs, eps);
  throw std::invalid_argument("kernel_bound_audit: beta must be 1 or 4");
}

}  // namespace gapforge
