#include "gapforge/gapstats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

#include "gapforge/quadrature.hpp"

namespace gapforge {

std::vector<GapRecord> extract_gaps(const Spectrum& s, double epsilon) {
  const double scale = std::pow(static_cast<double>(s.params.n), gap_exponent(s.params.beta));
  std::vector<GapRecord> out;
  const auto& v = s.values;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    if (!(v[i] > -2.0 + epsilon && v[i] < 2.0 - epsilon)) continue;
    const double g = v[i + 1] - v[i];
    out.push_back({scale * g, g, v[i]});
  }
  return out;
}

void validate(const GapLawSpec& spec) {
  require_beta(spec.beta);
  if (spec.k < 1) throw std::invalid_argument("k must be >= 1");
  const auto [lo, hi] = spec.interval;
  if (!(lo < hi && lo > -2.0 && hi < 2.0)) throw std::invalid_argument("interval must lie inside (-2, 2)");
  if (spec.window.intervals.empty()) throw std::invalid_argument("window must be nonempty");
  spec.window.measure();  // validates
}

double bulk_weight(int beta, std::pair<double, double> interval) {
  require_beta(beta);
  const double p = (beta + 2) / 2.0;
  auto f = [p](double x) { return std::pow(std::max(0.0, 4.0 - x * x), p); };
  QuadOptions opt;
  opt.abs_tol = 0.0;
  opt.rel_tol = 1e-13;
  return integrate(f, interval.first, interval.second, opt).value;
}

double theoretical_intensity(const GapLawSpec& spec) {
  validate(spec);
  return spec.window.moment(spec.beta) / gap_constant(spec.beta) * bulk_weight(spec.beta, spec.interval);
}

double tau_k_cdf(int beta, int k, double x) {
  require_beta(beta);
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (x <= 0.0) return 0.0;
  // Regularized lower incomplete gamma P(k, x^{beta+1}) equals the sum form.
  return boost::math::gamma_p(static_cast<double>(k), std::pow(x, beta + 1.0));
}

double tau_k_density(int beta, int k, double x) {
  require_beta(beta);
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (x <= 0.0) return 0.0;
  const double b1 = beta + 1.0;
  return b1 * std::exp((k * b1 - 1.0) * std::log(x) - std::pow(x, b1) - std::lgamma(static_cast<double>(k)));
}

double tau_normalization(int beta, std::pair<double, double> interval) {
  const double b1 = beta + 1.0;
  return std::pow(bulk_weight(beta, interval) / (b1 * gap_constant(beta)), 1.0 / b1);
}

std::optional<double> tau_k_normalize(const std::vector<GapRecord>& records, int n, const GapLawSpec& spec) {
  std::vector<double> raw;
  for (const auto& r : records)
    if (r.location > spec.interval.first && r.location < spec.interval.second) raw.push_back(r.raw_gap);
  if (static_cast<int>(raw.size()) < spec.k) return std::nullopt;
  std::nth_element(raw.begin(), raw.begin() + (spec.k - 1), raw.end());
  const double tk = raw[spec.k - 1];
  return tau_normalization(spec.beta, spec.interval) * std::pow(static_cast<double>(n), gap_exponent(spec.beta)) * tk;
}

int count_in_window(const std::vector<GapRecord>& records, const GapLawSpec& spec) {
  int c = 0;
  for (const auto& r : records) {
    if (!(r.location > spec.interval.first && r.location < spec.interval.second)) continue;
    for (const auto& [a, b] : spec.window.intervals) {
      if (r.rescaled_gap > a && r.rescaled_gap <= b) {
        ++c;
        break;
      }
    }
  }
  return c;
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw std::invalid_argument("ks_statistic: empty sample");
  std::sort(samples.begin(), samples.end());
  const double m = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, (i + 1) / m - f, f - i / m});
  }
  return d;
}

PoissonTestResult poisson_count_test(const std::vector<int>& counts, double mu) {
  if (counts.empty()) throw std::invalid_argument("poisson_count_test: no counts");
  if (!(mu > 0.0)) throw std::invalid_argument("poisson_count_test: mu must be positive");
  const double m = static_cast<double>(counts.size());
  PoissonTestResult r;
  r.observed.assign(4, 0);
  for (int c : counts) {
    if (c < 0) throw std::invalid_argument("poisson_count_test: negative count");
    ++r.observed[std::min(c, 3)];
  }
  const double p0 = std::exp(-mu), p1 = mu * p0, p2 = mu * mu / 2.0 * p0;
  r.expected = {m * p0, m * p1, m * p2, m * std::max(0.0, 1.0 - p0 - p1 - p2)};
  while (r.expected.size() > 1 && r.expected.back() < 5.0) {
    r.expected[r.expected.size() - 2] += r.expected.back();
    r.observed[r.observed.size() - 2] += r.observed.back();
    r.expected.pop_back();
    r.observed.pop_back();
  }
  r.dof = static_cast<int>(r.expected.size()) - 1;
  for (std::size_t i = 0; i < r.expected.size(); ++i) {
    const double diff = r.observed[i] - r.expected[i];
    r.chi2 += diff * diff / r.expected[i];
  }
  r.p_value = r.dof > 0 ? boost::math::gamma_q(r.dof / 2.0, r.chi2 / 2.0) : 1.0;
  return r;
}

}  // namespace gapforge
