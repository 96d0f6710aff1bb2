// Acceptance run: one PASS/FAIL line per criterion. Optional arguments pick a
// subset, e.g. `acceptance 3 5`.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "gapforge/correlations.hpp"
#include "gapforge/ensembles.hpp"
#include "gapforge/kernels.hpp"
#include "gapforge/matchings.hpp"
#include "gapforge/pfaffian.hpp"
#include "gapforge/quadrature.hpp"
#include "gapforge/special_functions.hpp"

using namespace gapforge;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[miss] " << what << "; ";
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------- 1

void criterion_1(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  int reports = 0, informational = 0;
  std::uint64_t checked = 0;
  for (int k = 1; k <= 3; ++k) {
    std::vector<LemmaReport> all = verify_identities(k);
    for (auto& r : verify_ord_bounds(k)) all.push_back(std::move(r));
    for (const auto& r : all) {
      if (r.informational) {
        ++informational;
        continue;
      }
      ++reports;
      checked += r.matchings_checked;
      o.require(r.passed(), r.lemma + " k=" + std::to_string(k) + " " + r.layout + " (" +
                                std::to_string(r.counterexample_count) + " counterexamples)");
    }
  }
  const ZLemmaReport z = verify_z_lemma();
  o.require(z.report.passed(), "Z lemma report");
  auto min_of = [&](int a1, int a2, int a3) -> std::optional<OrdValue> {
    for (const auto& b : z.buckets)
      if (b.a1 == a1 && b.a2 == a2 && b.a3 == a3) return b.min_weight;
    return std::nullopt;
  };
  const auto m012 = min_of(0, 1, 2), m021 = min_of(0, 2, 1), m102 = min_of(1, 0, 2);
  o.require(m012 && OrdValue::from_fraction(15, 2) <= *m012, "min over X(0,1,2) >= 15/2");
  o.require(m021 && OrdValue{50} <= *m021, "min over X(0,2,1) >= 5");
  o.require(m102 && OrdValue{60} <= *m102, "min over X(1,0,2) >= 6");
  const double secs = seconds_since(t0);
  o.require(secs < 120.0, "runtime < 2 min");
  o.detail << reports << " reports, " << checked << " matchings, " << informational
           << " literal-text variants not gated; Z minima " << (m012 ? m012->to_string() : "-") << ", "
           << (m021 ? m021->to_string() : "-") << ", " << (m102 ? m102->to_string() : "-") << "; " << secs << " s";
}

// ---------------------------------------------------------------- 2

void criterion_2(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<double> grid = {1e3, 1e4, 1e5, 1e6};
  double worst = 0.0;
  int cells = 0;
  for (int a = 0; a <= 2; ++a)
    for (int b = 0; b <= 3; ++b) {
      const auto t = kappa_table(a, b);
      if (!t) continue;
      ++cells;
      const double est = kappa_oracle(a, b, grid);
      const double err = std::fabs(est - t->value());
      worst = std::max(worst, err);
      o.require(err <= 0.05, "kappa(" + std::to_string(a) + "," + std::to_string(b) + ") estimate " +
                                 std::to_string(est) + " vs " + t->to_string());
    }
  o.require(cells == 10, "10 table cells");
  o.detail << cells << " cells, max |fit - table| = " << worst << "; " << seconds_since(t0) << " s";
}

// ---------------------------------------------------------------- 3

void criterion_3(Outcome& o) {
  std::mt19937_64 g(20240603);
  std::normal_distribution<double> nd;
  double worst_path = 0.0, worst_det = 0.0, worst_cong = 0.0;
  for (int dim = 2; dim <= 10; dim += 2)
    for (int rep = 0; rep < 100; ++rep) {
      SkewMatrix m(dim);
      for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j) m.set(i, j, nd(g));
      const double pn = pfaffian_numeric(m), pc = pfaffian_combinatorial(m);
      worst_path = std::max(worst_path, std::fabs(pn - pc) / std::max(std::fabs(pn), std::fabs(pc)));
      const double det = m.matrix().determinant();
      worst_det = std::max(worst_det, std::fabs(pn * pn - det) / std::fabs(det));
      Eigen::MatrixXd a(dim, dim);
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) a(i, j) = nd(g);
      const double lhs = pfaffian_numeric(congruence_transform(m, a));
      const double rhs = a.determinant() * pn;
      worst_cong = std::max(worst_cong, std::fabs(lhs - rhs) / std::fabs(rhs));
    }
  o.require(worst_path <= 1e-10, "numeric vs combinatorial <= 1e-10");
  o.require(worst_det <= 1e-8, "Pf^2 = det <= 1e-8");
  o.require(worst_cong <= 1e-9, "congruence <= 1e-9");
  o.detail << "500 matrices; max rel: paths " << worst_path << ", Pf^2/det " << worst_det << ", congruence "
           << worst_cong;
}

// ---------------------------------------------------------------- 4

// Each scaled deviation series must show no growth: log-log slope in n at
// most 0.1.
void criterion_4(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<int> ns = {50, 100, 200, 400};
  const std::vector<double> x0s = {-1.0, 0.0, 1.0};
  const std::vector<double> nd(ns.begin(), ns.end());
  auto check = [&](const std::string& label, const std::vector<double>& series) {
    const double slope = cli::loglog_slope(nd, series);
    o.require(slope <= 0.1, label + " slope " + std::to_string(slope));
    o.detail << label << " [";
    for (std::size_t i = 0; i < series.size(); ++i) o.detail << (i ? " " : "") << series[i];
    o.detail << "] slope " << slope << "; ";
  };
  for (int beta : {4, 1}) {
    std::vector<double> s, syx, v, j;
    for (int n : ns) {
      const cli::KernelLimitRow r = cli::kernel_limit_scan(beta, n, 9, x0s, kDefaultBulkEpsilon);
      const double rn = std::sqrt(static_cast<double>(n));
      s.push_back(r.dev_s * rn);
      syx.push_back(r.dev_s_yx * rn);
      v.push_back(r.dev_v * n);
      j.push_back(beta == 4 ? r.dev_j_rel * rn : r.dev_j * rn);
    }
    const std::string b = "b" + std::to_string(beta) + " ";
    check(b + "S*sqrt(n)", s);
    check(b + "S(y,x)*sqrt(n)", syx);
    check(b + "V*n", v);
    check(b + (beta == 4 ? "J/|u-v|*sqrt(n)" : "J*sqrt(n)"), j);
  }
  const double secs = seconds_since(t0);
  o.require(secs < 300.0, "runtime < 5 min");
  o.detail << secs << " s";
}

// ---------------------------------------------------------------- 5

// The closed form is gated on rescaled gaps u in [0.05, 0.3] and on separated
// pairs. Deeper in, the density sits ~u^beta below the O(1) entries and both
// routes lose digits to cancellation; those points are reported only.
void criterion_5(Outcome& o) {
  double worst = 0.0, worst_deep = 0.0;
  for (int beta : {1, 4})
    for (int n : {10, 50, 400})
      for (double l : {0.0, -1.2, 0.7}) {
        const double c = n * semicircle(l);
        auto rel = [&](double x) {
          const GapConfiguration cfg{beta, n, {{l, x}}};
          const double pf = pfaffian_numeric(assemble_correlation_matrix(cfg));
          return std::fabs(pf_mii_closed(n, beta, l, x) - pf) / std::fabs(pf);
        };
        for (double u : {0.05, 0.1, 0.2, 0.3}) worst = std::max(worst, rel(l + u / c));
        worst = std::max(worst, rel(l + 0.4));
        for (double u : {0.003, 0.01}) worst_deep = std::max(worst_deep, rel(l + u / c));
      }
  o.require(worst <= 1e-9, "closed form vs 4x4 Pfaffian <= 1e-9");
  o.detail << "closed vs Pfaffian max rel " << worst << " (u < 0.05, not gated: " << worst_deep << "); ";

  std::vector<double> us;
  for (int i = 0; i < 6; ++i) us.push_back(0.05 + 0.05 * i);
  double lo = 1e9, hi = -1e9;
  for (const auto& r : cli::correlation_scan(4, 400, 0.0, us)) {
    lo = std::min(lo, r.ratio);
    hi = std::max(hi, r.ratio);
  }
  o.require(lo >= 0.95 && hi <= 1.05, "b4 n=400 ratio in [0.95, 1.05]");
  o.detail << "b4 n=400 ratio range [" << lo << ", " << hi << "]; ";

  const std::vector<double> small = {0.01, 0.02, 0.03, 0.04, 0.05};
  const double c4 = cli::small_u_coefficient(4, 400, 0.0, small);
  const double c1 = cli::small_u_coefficient(1, 400, 0.0, small);
  const double e4 = c4 / (16 * std::pow(kPi, 4) / 135) - 1.0;
  const double e1 = c1 / (kPi * kPi / 6) - 1.0;
  o.require(std::fabs(e4) <= 0.05, "b4 small-u coefficient within 5%");
  o.require(std::fabs(e1) <= 0.05, "b1 small-u coefficient within 5%");
  o.detail << "coefficients b4 " << c4 << " (" << 100 * e4 << "%), b1 " << c1 << " (" << 100 * e1 << "%)";
}

// ---------------------------------------------------------------- 6

void criterion_6(Outcome& o) {
  struct Case {
    int beta, n;
    double ks_max;
  };
  for (const Case c : {Case{2, 2048, 0.05}, Case{4, 1024, 0.08}, Case{1, 2048, 0.08}}) {
    const auto t0 = std::chrono::steady_clock::now();
    const cli::SampleGapsResult r = cli::run_sample_gaps(c.beta, c.n, 2000, 1, kDefaultBulkEpsilon, 1);
    const std::string b = "b" + std::to_string(c.beta);
    o.require(r.ks <= c.ks_max, b + " KS " + std::to_string(r.ks));
    o.require(r.p_poisson > 0.01, b + " Poisson p " + std::to_string(r.p_poisson));
    o.detail << b << " n=" << c.n << ": KS " << r.ks << " (<= " << c.ks_max << "), Poisson p " << r.p_poisson
             << ", mean count " << r.mu_empirical << " vs " << r.mu_theory << ", skipped " << r.skipped << ", "
             << seconds_since(t0) << " s; ";
  }
}

// ---------------------------------------------------------------- 7

double semicircle_cdf(double x) {
  if (x <= -2.0) return 0.0;
  if (x >= 2.0) return 1.0;
  return 0.5 + x * std::sqrt(4.0 - x * x) / (4.0 * kPi) + std::asin(x / 2.0) / kPi;
}

void criterion_7(Outcome& o) {
  const int n = 4096, draws = 50;
  const double bin = 0.05, lo = -2.5;
  const int bins = 100;
  std::vector<double> hist(bins, 0.0);
  double outside = 0.0;
  for (int d = 0; d < draws; ++d) {
    for (double x : sample_spectrum({2, n, 7, static_cast<std::uint64_t>(d)}).values) {
      const int b = static_cast<int>(std::floor((x - lo) / bin));
      if (b < 0 || b >= bins)
        outside += 1.0;
      else
        hist[b] += 1.0;
    }
  }
  const double total = static_cast<double>(n) * draws;
  double tv = outside / total;
  for (int b = 0; b < bins; ++b) {
    const double a = lo + b * bin;
    tv += std::fabs(hist[b] / total - (semicircle_cdf(a + bin) - semicircle_cdf(a)));
  }
  tv *= 0.5;
  o.require(tv <= 0.05, "TV <= 0.05");
  o.detail << "TV " << tv << " over " << draws << " draws of n=" << n;
}

// ---------------------------------------------------------------- 8

void criterion_8(Outcome& o) {
  double ortho = 0.0;
  const double h = 0.05;
  std::vector<std::vector<double>> table;
  for (double x = -25.0; x <= 25.0 + 1e-9; x += h) table.push_back(hermite_wave_table(30, x));
  for (int i = 0; i <= 30; ++i)
    for (int j = i; j <= 30; ++j) {
      double s = 0.0;
      for (const auto& row : table) s += row[i] * row[j];
      ortho = std::max(ortho, std::fabs(s * h - (i == j ? 1.0 : 0.0)));
    }
  o.require(ortho <= 1e-8, "orthonormality <= 1e-8");
  o.detail << "orthonormality max dev " << ortho << "; ";

  // Max over theta of |phi_n - approximation| in units of the envelope.
  const std::vector<double> ns = {100, 200, 400, 800};
  std::vector<double> errs;
  for (double nd : ns) {
    const int n = static_cast<int>(nd);
    double err = 0.0;
    for (double th = 0.3; th <= kPi - 0.3; th += 0.002) {
      const double x = 2.0 * std::sqrt(n + 1.0) * std::cos(th);
      const double env = std::pow(kPi * std::sin(th), -0.5) * std::pow(nd, -0.25);
      err = std::max(err, std::fabs(hermite_wave(n, x) - plancherel_rotach(n, th)) / env);
    }
    errs.push_back(err);
  }
  const double slope = cli::loglog_slope(ns, errs);
  bool decreasing = true;
  for (std::size_t i = 1; i < errs.size(); ++i) decreasing = decreasing && errs[i] < errs[i - 1];
  o.require(decreasing, "bulk asymptotic error decreasing in n");
  o.require(slope <= -1.8, "bulk asymptotic error slope <= -1.8 (n^-2)");
  o.detail << "bulk asymptotic rel err [";
  for (std::size_t i = 0; i < errs.size(); ++i) o.detail << (i ? " " : "") << errs[i];
  o.detail << "] slope " << slope << "; ";

  double worst = 0.0;
  for (int m = 0; m <= 8; ++m) {
    const int n2 = 2 * m;
    double dfact = 1.0;
    for (int t = n2 - 1; t > 1; t -= 2) dfact *= t;
    double fact = 1.0;
    for (int t = 2; t <= n2; ++t) fact *= t;
    const double got = hermite_half_line_integral(n2) * std::pow(2.0 * kPi, 0.25) * std::sqrt(fact);
    const double expect = dfact * std::sqrt(kPi);
    worst = std::max(worst, std::fabs(got / expect - 1.0));
  }
  o.require(worst <= 1e-8, "half-line integrals <= 1e-8");
  o.detail << "half-line integral max rel " << worst;
}

// ---------------------------------------------------------------- 9

struct Moment {
  double mean = 0.0, se = 0.0;
};

template <class F>
Moment sample_moment(int draws, F f) {
  double s = 0.0, s2 = 0.0;
  for (int d = 0; d < draws; ++d) {
    const double v = f(d);
    s += v;
    s2 += v * v;
  }
  const double m = s / draws;
  return {m, std::sqrt(std::max(0.0, s2 / draws - m * m) / draws)};
}

// E f over the n = 2 joint density |x-y|^beta exp(-beta n (x^2+y^2)/4) / Z.
double joint_expectation_n2(int beta, const std::function<double(double, double)>& f, double* z_out = nullptr) {
  QuadOptions opt;
  opt.rel_tol = 1e-11;
  opt.abs_tol = 0.0;
  auto weight = [beta](double x, double y) {
    return std::pow(std::fabs(x - y), beta) * std::exp(-beta * (x * x + y * y) / 2.0);
  };
  auto outer = [&](const std::function<double(double, double)>& g) {
    return integrate(
               [&](double x) {
                 return integrate([&](double y) { return g(x, y) * weight(x, y); }, -12.0, 12.0,
                                  std::vector<double>{x}, opt)
                     .value;
               },
               -12.0, 12.0, opt)
        .value;
  };
  const double z = outer([](double, double) { return 1.0; });
  if (z_out) *z_out = z;
  return outer(f) / z;
}

void criterion_9(Outcome& o) {
  const int draws = 40000;
  double worst_z = 0.0, worst_sigma = 0.0;
  auto compare = [&](const std::string& label, double expect, const Moment& m) {
    const double sig = std::fabs(m.mean - expect) / m.se;
    worst_sigma = std::max(worst_sigma, sig);
    o.require(sig <= 3.0, label + " off by " + std::to_string(sig) + " SE");
  };
  for (int beta : {1, 2, 4}) {
    const std::string b = "b" + std::to_string(beta);
    // n = 1: weight exp(-beta x^2 / 4).
    QuadOptions opt;
    opt.abs_tol = 0.0;
    opt.rel_tol = 1e-12;
    const double z1 = integrate([beta](double x) { return std::exp(-beta * x * x / 4.0); }, -30.0, 30.0, opt).value;
    const double m1 =
        integrate([beta](double x) { return x * x * std::exp(-beta * x * x / 4.0); }, -30.0, 30.0, opt).value / z1;
    worst_z = std::max(worst_z, std::fabs(std::log(z1) - selberg_log_z(beta, 1)));
    compare(b + " n=1 E x^2", m1, sample_moment(draws, [beta](int d) {
              const double x = sample_spectrum({beta, 1, 11, static_cast<std::uint64_t>(d)}).values[0];
              return x * x;
            }));

    double z2 = 0.0;
    const double gap = joint_expectation_n2(beta, [](double x, double y) { return std::fabs(x - y); }, &z2);
    const double sq = joint_expectation_n2(beta, [](double x, double y) { return x * x + y * y; });
    const double q4 = joint_expectation_n2(beta, [](double x, double y) { return std::pow(x, 4) + std::pow(y, 4); });
    worst_z = std::max(worst_z, std::fabs(std::log(z2) - selberg_log_z(beta, 2)));
    std::vector<std::vector<double>> spectra(draws);
    for (int d = 0; d < draws; ++d) spectra[d] = sample_spectrum({beta, 2, 12, static_cast<std::uint64_t>(d)}).values;
    compare(b + " n=2 E gap", gap, sample_moment(draws, [&](int d) { return spectra[d][1] - spectra[d][0]; }));
    compare(b + " n=2 E sum x^2", sq, sample_moment(draws, [&](int d) {
              return spectra[d][0] * spectra[d][0] + spectra[d][1] * spectra[d][1];
            }));
    compare(b + " n=2 E sum x^4", q4, sample_moment(draws, [&](int d) {
              return std::pow(spectra[d][0], 4) + std::pow(spectra[d][1], 4);
            }));
  }
  o.require(worst_z <= 1e-6, "normalization constant vs quadrature <= 1e-6");
  o.detail << "joint-density moments: max " << worst_sigma << " SE; log Z max abs dev " << worst_z << "; ";

  // Dense vs tridiagonal at n = 8, beta = 4: two-sample z on several statistics.
  const int dd = 4000, n = 8;
  std::vector<std::vector<double>> tri(dd), den(dd);
  double split = 0.0;
  for (int d = 0; d < dd; ++d) {
    tri[d] = sample_spectrum({4, n, 21, static_cast<std::uint64_t>(d)}).values;
    const auto raw = sample_dense_raw({4, n, 22, static_cast<std::uint64_t>(d)});
    for (int i = 0; i < n; ++i) split = std::max(split, std::fabs(raw[2 * i] - raw[2 * i + 1]));
    den[d] = sample_dense({4, n, 22, static_cast<std::uint64_t>(d)}).values;
  }
  const std::vector<std::pair<std::string, std::function<double(const std::vector<double>&)>>> stats = {
      {"max", [](const std::vector<double>& v) { return v.back(); }},
      {"min", [](const std::vector<double>& v) { return v.front(); }},
      {"mid gap", [](const std::vector<double>& v) { return v[4] - v[3]; }},
      {"sum x^2", [](const std::vector<double>& v) {
         double s = 0.0;
         for (double x : v) s += x * x;
         return s;
       }}};
  double worst_two = 0.0;
  for (const auto& [name, f] : stats) {
    const Moment a = sample_moment(dd, [&](int d) { return f(tri[d]); });
    const Moment b = sample_moment(dd, [&](int d) { return f(den[d]); });
    const double z = std::fabs(a.mean - b.mean) / std::hypot(a.se, b.se);
    worst_two = std::max(worst_two, z);
    o.require(z <= 3.0, "dense vs tridiagonal " + name + " z=" + std::to_string(z));
  }
  o.require(split <= 1e-8, "Kramers pairs within 1e-8");
  o.detail << "dense vs tridiagonal b4 n=8 max z " << worst_two << "; Kramers max split " << split;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<void(Outcome&)>> criteria = {criterion_1, criterion_2, criterion_3,
                                                               criterion_4, criterion_5, criterion_6,
                                                               criterion_7, criterion_8, criterion_9};
  std::set<int> pick;
  for (int i = 1; i < argc; ++i) pick.insert(std::stoi(argv[i]));
  int failures = 0;
  for (int c = 1; c <= 9; ++c) {
    if (!pick.empty() && !pick.count(c)) continue;
    Outcome o;
    try {
      criteria[c - 1](o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    if (!o.pass) ++failures;
    std::printf("%s criterion %d: %s\n", o.pass ? "PASS" : "FAIL", c, o.detail.str().c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
