#ifndef GAPFORGE_SPECIAL_FUNCTIONS_HPP
#define GAPFORGE_SPECIAL_FUNCTIONS_HPP

#include <vector>

namespace gapforge {

// phi_n(x) = exp(-x^2/4) H_n(x) / ((2 pi)^{1/4} sqrt(n!)), with H_n the
// probabilists' Hermite polynomial. Evaluated by the normalized three-term
// recurrence with a running log-scale, so neither H_n nor n! is formed.
double hermite_wave(int n, double x);

// phi_0(x), ..., phi_n(x).
std::vector<double> hermite_wave_table(int n, double x);

// phi_m(s) and its s-derivatives of order 0..4 for m = n and m = n-1, from a
// single recurrence pass. Uses phi_m' = -(s/2) phi_m + sqrt(m) phi_{m-1} and
// the Hermite equation phi_m'' = (s^2/4 - m - 1/2) phi_m.
struct WavePair {
  double top[5] = {0, 0, 0, 0, 0};   // phi_n and derivatives
  double next[5] = {0, 0, 0, 0, 0};  // phi_{n-1} and derivatives
};
WavePair hermite_wave_pair(int n, double s);

// phi_n'(x).
double hermite_wave_deriv(int n, double x);

// d/dx phi_n(sqrt(n) x) = n phi_{n-1}(sqrt(n) x) - (n x / 2) phi_n(sqrt(n) x).
// Throws std::invalid_argument for n < 1.
double hermite_wave_scaled_deriv(int n, double x);

// Point beyond which |phi_n| is below 1e-16: 2 sqrt(n) + 10.
double hermite_cutoff(int n);

// int_a^b phi_n(t) dt by adaptive quadrature (clipped to the cutoff).
double hermite_partial_integral(int n, double a, double b);

// int_0^inf phi_n(t) dt.
double hermite_half_line_integral(int n);

// int_{-inf}^{inf} phi_n(t) dt (zero for odd n).
double hermite_full_line_integral(int n);

// int_y^inf phi_n(t) dt, as int_0^inf phi_n - int_0^y phi_n.
double hermite_tail_integral(int n, double y);

// sin(pi t)/(pi t), series near 0.
double sine_kernel(double t);
double sine_kernel_deriv(double t);
// int_0^x sine_kernel(t) dt = Si(pi x)/pi.
double sine_kernel_integral(double x);

// sqrt(4 - x^2)/(2 pi) on [-2,2], else 0.
double semicircle(double x);

struct PlancherelRotachTerms {
  double theta = 0.0;
  double b_val = 0.0;
  double R_val = 0.0;
  double Q_val = 0.0;
};

// b(theta), R_m(theta), Q_m(theta).
PlancherelRotachTerms plancherel_rotach_terms(int m, double theta);

// Two-term bulk asymptotic approximation of phi_n(2 sqrt(n+1) cos theta):
// (pi sin theta)^{-1/2} n^{-1/4} (R_{n+1} + (Q_{n+1} - 5 R_{n+1}/24)/n).
// Throws std::invalid_argument unless theta is in (eps_theta, pi - eps_theta).
double plancherel_rotach(int n, double theta, double eps_theta = 0.05);

}  // namespace gapforge

#endif
