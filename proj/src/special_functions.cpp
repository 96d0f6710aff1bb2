#include "gapforge/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gapforge/quadrature.hpp"

namespace gapforge {
namespace {

constexpr double kPi = std::numbers::pi;
const double kNorm = std::pow(2.0 * kPi, -0.25);
constexpr double kRescale = 1e150;
const double kLogRescale = std::log(kRescale);

// Unweighted recurrence p_k = phi_k(s) exp(s^2/4) (2 pi)^{1/4}, returning
// p_n, p_{n-1}, p_{n-2} and the accumulated log scale.
struct Recur {
  double p[3] = {0, 0, 0};  // p_n, p_{n-1}, p_{n-2}
  double log_scale = 0.0;
};

Recur run_recurrence(int n, double s) {
  double pm2 = 0.0, pm1 = 0.0, p = 1.0;
  double log_scale = 0.0;
  for (int k = 0; k < n; ++k) {
    const double next =
        (s * p - std::sqrt(static_cast<double>(k)) * pm1) /
        std::sqrt(static_cast<double>(k + 1));
    pm2 = pm1;
    pm1 = p;
    p = next;
    if (std::abs(p) > kRescale) {
      p /= kRescale;
      pm1 /= kRescale;
      pm2 /= kRescale;
      log_scale += kLogRescale;
    }
  }
  Recur r;
  r.p[0] = p;
  r.p[1] = pm1;
  r.p[2] = pm2;
  r.log_scale = log_scale;
  return r;
}

double weight(double s, double log_scale) {
  return kNorm * std::exp(-0.25 * s * s + log_scale);
}

void fill_derivs(double d[5], int m, double s, double phi_m, double phi_mm1) {
  const double q = 0.25 * s * s - m - 0.5;
  d[0] = phi_m;
  d[1] = -0.5 * s * phi_m + std::sqrt(static_cast<double>(m)) * phi_mm1;
  d[2] = q * d[0];
  d[3] = 0.5 * s * d[0] + q * d[1];
  d[4] = 0.5 * d[0] + s * d[1] + q * d[2];
}

QuadOptions hermite_quad_options(int n, double a, double b) {
  QuadOptions opt;
  opt.abs_tol = 1e-12;
  // Roughly one panel per half wavelength of phi_n in the bulk.
  const double wavelength = 2.0 * kPi / std::sqrt(n + 1.0);
  opt.initial_panels =
      std::max(1, static_cast<int>(std::ceil(std::abs(b - a) / (0.5 * wavelength))));
  return opt;
}

}  // namespace

double hermite_wave(int n, double x) {
  if (n < 0) throw std::invalid_argument("hermite_wave: n must be >= 0");
  const Recur r = run_recurrence(n, x);
  return r.p[0] * weight(x, r.log_scale);
}

std::vector<double> hermite_wave_table(int n, double x) {
  if (n < 0) throw std::invalid_argument("hermite_wave_table: n must be >= 0");
  std::vector<double> out(n + 1);
  // Track scale per entry so earlier values are not lost when rescaling.
  double pm1 = 0.0, p = 1.0, log_scale = 0.0;
  out[0] = p * weight(x, log_scale);
  for (int k = 0; k < n; ++k) {
    const double next =
        (x * p - std::sqrt(static_cast<double>(k)) * pm1) /
        std::sqrt(static_cast<double>(k + 1));
    pm1 = p;
    p = next;
    if (std::abs(p) > kRescale) {
      p /= kRescale;
      pm1 /= kRescale;
      log_scale += kLogRescale;
    }
    out[k + 1] = p * weight(x, log_scale);
  }
  return out;
}

WavePair hermite_wave_pair(int n, double s) {
  if (n < 0) throw std::invalid_argument("hermite_wave_pair: n must be >= 0");
  const Recur r = run_recurrence(n, s);
  const double w = weight(s, r.log_scale);
  const double phi_n = r.p[0] * w;
  const double phi_nm1 = r.p[1] * w;
  const double phi_nm2 = r.p[2] * w;
  WavePair out;
  fill_derivs(out.top, n, s, phi_n, phi_nm1);
  if (n >= 1) fill_derivs(out.next, n - 1, s, phi_nm1, phi_nm2);
  return out;
}

double hermite_wave_deriv(int n, double x) {
  return hermite_wave_pair(n, x).top[1];
}

double hermite_wave_scaled_deriv(int n, double x) {
  if (n < 1) {
    throw std::invalid_argument("hermite_wave_scaled_deriv: n must be >= 1");
  }
  const double s = std::sqrt(static_cast<double>(n)) * x;
  const Recur r = run_recurrence(n, s);
  const double w = weight(s, r.log_scale);
  return n * r.p[1] * w - 0.5 * n * x * r.p[0] * w;
}

double hermite_cutoff(int n) { return 2.0 * std::sqrt(static_cast<double>(n)) + 10.0; }

double hermite_partial_integral(int n, double a, double b) {
  const double cut = hermite_cutoff(n);
  const double sgn = a <= b ? 1.0 : -1.0;
  double lo = std::max(std::min(a, b), -cut);
  double hi = std::min(std::max(a, b), cut);
  if (lo >= hi) return 0.0;
  const QuadResult q = integrate([n](double t) { return hermite_wave(n, t); },
                                 lo, hi, hermite_quad_options(n, lo, hi));
  return sgn * q.value;
}

double hermite_half_line_integral(int n) {
  return hermite_partial_integral(n, 0.0, hermite_cutoff(n));
}

double hermite_full_line_integral(int n) {
  if (n % 2 == 1) return 0.0;
  return 2.0 * hermite_half_line_integral(n);
}

double hermite_tail_integral(int n, double y) {
  const double cut = hermite_cutoff(n);
  if (y >= cut) return 0.0;
  const double half = hermite_half_line_integral(n);
  if (y <= -cut) return n % 2 == 0 ? 2.0 * half : 0.0;
  return half - hermite_partial_integral(n, 0.0, y);
}

double sine_kernel(double t) {
  const double z = kPi * t;
  if (std::abs(t) < 1e-6) {
    const double z2 = z * z;
    return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
  }
  return std::sin(z) / z;
}

double sine_kernel_deriv(double t) {
  if (std::abs(t) < 1e-2) {
    const double p2 = kPi * kPi;
    const double t2 = t * t;
    return t * p2 *
           (-1.0 / 3.0 +
            p2 * t2 * (1.0 / 30.0 + p2 * t2 * (-1.0 / 840.0 + p2 * t2 / 45360.0)));
  }
  const double z = kPi * t;
  return (z * std::cos(z) - std::sin(z)) / (kPi * t * t);
}

double sine_kernel_integral(double x) {
  const double z = kPi * x;
  if (std::abs(z) <= 2.0 * kPi) {
    // Si(z) = sum_k (-1)^k z^{2k+1} / ((2k+1) (2k+1)!)
    double term = z;  // z^{2k+1}/(2k+1)!
    double sum = 0.0;
    for (int k = 0; k < 60; ++k) {
      const double contrib = term / (2 * k + 1);
      sum += contrib;
      if (std::abs(contrib) < 1e-18 * std::abs(sum)) break;
      term *= -z * z / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
    }
    return sum / kPi;
  }
  QuadOptions opt;
  opt.abs_tol = 1e-14;
  opt.initial_panels = static_cast<int>(std::ceil(std::abs(x))) * 2;
  return integrate(sine_kernel, 0.0, x, opt).value;
}

double semicircle(double x) {
  if (x <= -2.0 || x >= 2.0) return 0.0;
  return std::sqrt(4.0 - x * x) / (2.0 * kPi);
}

PlancherelRotachTerms plancherel_rotach_terms(int m, double theta) {
  PlancherelRotachTerms t;
  t.theta = theta;
  t.b_val = theta - 0.5 * std::sin(2.0 * theta);
  const double phase = m * t.b_val;
  const double sn = std::sin(theta);
  t.R_val = std::sin(phase + 0.25 * kPi - 0.5 * theta);
  t.Q_val = 3.0 / 16.0 / (sn * sn) * std::sin(phase - 0.75 * kPi - 2.5 * theta) +
            5.0 / 96.0 / (sn * sn * sn) *
                std::sin(phase - 1.25 * kPi - 3.5 * theta);
  return t;
}

double plancherel_rotach(int n, double theta, double eps_theta) {
  if (n < 1) throw std::invalid_argument("plancherel_rotach: n must be >= 1");
  if (!(theta > eps_theta && theta < kPi - eps_theta)) {
    throw std::invalid_argument("plancherel_rotach: theta outside bulk window");
  }
  const PlancherelRotachTerms t = plancherel_rotach_terms(n + 1, theta);
  const double nd = static_cast<double>(n);
  return std::pow(kPi * std::sin(theta), -0.5) * std::pow(nd, -0.25) *
         (t.R_val + (t.Q_val - 5.0 / 24.0 * t.R_val) / nd);
}

}  // namespace gapforge
