#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <locale>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <Eigen/Dense>
#include <json.hpp>

#include "gapforge/correlations.hpp"
#include "gapforge/gapstats.hpp"
#include "gapforge/kernels.hpp"
#include "gapforge/matchings.hpp"
#include "gapforge/parallel.hpp"
#include "gapforge/special_functions.hpp"

namespace gapforge::cli {

using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::ostringstream csv_stream() {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(17);
  return os;
}

void write_file(const std::filesystem::path& p, const std::string& content) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << content;
}

json config_json(const RunConfig& c) {
  return json{{"command", c.command}, {"beta", c.beta},     {"n", c.n},         {"trials", c.trials},
              {"seed", c.seed},       {"epsilon", c.epsilon}, {"k", c.k},         {"which", c.which},
              {"grid", c.grid},       {"out", c.out},       {"format", c.format}};
}

// "start:stop:count" (inclusive linspace) or a comma list.
std::vector<double> parse_grid(const std::string& spec) {
  std::vector<double> out;
  if (spec.find(':') != std::string::npos) {
    std::istringstream is(spec);
    is.imbue(std::locale::classic());
    double a = 0, b = 0;
    int m = 0;
    char c1 = 0, c2 = 0;
    if (!(is >> a >> c1 >> b >> c2 >> m) || c1 != ':' || c2 != ':' || m < 1)
      throw UsageError("grid must be start:stop:count");
    for (int i = 0; i < m; ++i) out.push_back(m == 1 ? a : a + (b - a) * i / (m - 1));
    return out;
  }
  std::istringstream is(spec);
  is.imbue(std::locale::classic());
  std::string tok;
  while (std::getline(is, tok, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw UsageError("bad grid value '" + tok + "'");
    }
  }
  if (out.empty()) throw UsageError("empty grid");
  return out;
}

json report_json(const LemmaReport& r) {
  return json{{"lemma", r.lemma},
              {"k", r.k},
              {"layout", r.layout},
              {"matchings_checked", r.matchings_checked},
              {"counterexample_count", r.counterexample_count},
              {"counterexamples", r.counterexamples},
              {"notes", r.notes},
              {"informational", r.informational}};
}

bool any_failure(const std::vector<LemmaReport>& rs) {
  for (const auto& r : rs)
    if (!r.informational && !r.passed()) return true;
  return false;
}

int cmd_sample_gaps(const RunConfig& c) {
  if (c.n.size() != 1) throw UsageError("sample-gaps takes a single --n");
  if (c.trials < 1) throw UsageError("--trials must be >= 1");
  if (c.n[0] < 2) throw UsageError("--n must be >= 2");
  if (c.k < 1) throw UsageError("--k must be >= 1");
  if (!(c.epsilon > 0.0 && c.epsilon < 2.0)) throw UsageError("--epsilon must be in (0,2)");
  if (c.format != "csv" && c.format != "json") throw UsageError("--format must be csv or json");
  const SampleGapsResult r = run_sample_gaps(c.beta, c.n[0], c.trials, c.seed, c.epsilon, c.k);

  const std::filesystem::path dir(c.out);
  if (c.format == "csv") {
    auto tau = csv_stream();
    tau << "draw,k,tau_k\n";
    for (std::size_t i = 0; i < r.tau.size(); ++i) tau << r.draws_with_tau[i] << ',' << r.k << ',' << r.tau[i] << '\n';
    write_file(dir / "sample_gaps_tau.csv", tau.str());
    auto cnt = csv_stream();
    cnt << "draw,count_in_AxI\n";
    for (std::size_t i = 0; i < r.counts.size(); ++i) cnt << i << ',' << r.counts[i] << '\n';
    write_file(dir / "sample_gaps_counts.csv", cnt.str());
  } else {
    json rows = json::array();
    for (std::size_t i = 0; i < r.tau.size(); ++i) rows.push_back({{"draw", r.draws_with_tau[i]}, {"k", r.k}, {"tau_k", r.tau[i]}});
    write_file(dir / "sample_gaps_tau.json", rows.dump(2) + "\n");
    write_file(dir / "sample_gaps_counts.json", json(r.counts).dump() + "\n");
  }
  json summary{{"schema_version", kSchemaVersion},
               {"config", config_json(c)},
               {"beta", r.beta},
               {"n", r.n},
               {"trials", r.trials},
               {"k", r.k},
               {"skipped", r.skipped},
               {"ks", r.ks},
               {"p_poisson", r.p_poisson},
               {"chi2", r.chi2},
               {"dof", r.dof},
               {"mu_theory", r.mu_theory},
               {"mu_empirical", r.mu_empirical},
               {"interval", {-2.0 + c.epsilon, 2.0 - c.epsilon}},
               {"window", {0.0, 1.0}}};
  write_file(dir / "sample_gaps_summary.json", summary.dump(2) + "\n");
  std::cout << summary.dump(2) << "\n";
  return kOk;
}

int cmd_lemma_verify(const RunConfig& c) {
  const std::string& w = c.which;
  const std::filesystem::path dir(c.out);
  json doc{{"schema_version", kSchemaVersion}, {"config", config_json(c)}};
  bool failed = false;

  if (w == "identities" || w == "ord1" || w == "ord2" || w == "ord3" || w == "ord4") {
    if (c.k < 1 || c.k > 3) throw UsageError("--k must be in [1,3]");
    std::vector<LemmaReport> reports;
    if (w == "identities") {
      reports = verify_identities(c.k);
    } else {
      const char* layout = w == "ord1" ? "standard_4k" : w == "ord2" ? "extended_4k2" : w == "ord3" ? "extended_4k4" : "goe_4k";
      for (auto& r : verify_ord_bounds(c.k))
        if (r.layout == layout) reports.push_back(std::move(r));
    }
    failed = any_failure(reports);
    json certs = json::array();
    for (const auto& r : reports) certs.push_back(report_json(r));
    doc["certificates"] = certs;
    write_file(dir / ("lemma_" + w + "_k" + std::to_string(c.k) + ".json"), doc.dump(2) + "\n");
  } else if (w == "zmatrix") {
    const ZLemmaReport z = verify_z_lemma();
    failed = !z.report.passed();
    json buckets = json::array();
    for (const auto& b : z.buckets)
      buckets.push_back({{"a1", b.a1}, {"a2", b.a2}, {"a3", b.a3}, {"count", b.count},
                         {"min", b.min_weight.to_string()}, {"min_value", b.min_weight.value()}});
    doc["certificates"] = json::array({report_json(z.report)});
    doc["x0_size"] = z.x0_size;
    doc["buckets"] = buckets;
    write_file(dir / "lemma_zmatrix.json", doc.dump(2) + "\n");
  } else if (w == "kappa") {
    const std::vector<double> grid = c.grid.empty() ? std::vector<double>{1e3, 1e4, 1e5, 1e6} : parse_grid(c.grid);
    if (grid.size() < 3) throw UsageError("kappa needs at least 3 grid points");
    for (double n : grid)
      if (!(n > 10.0)) throw UsageError("kappa grid values must exceed 10");
    json rows = json::array();
    LemmaReport rep;
    rep.lemma = "kappa_table";
    rep.layout = "oracle";
    for (int a = 0; a <= 2; ++a)
      for (int b = 0; b <= 3; ++b) {
        const auto t = kappa_table(a, b);
        if (!t) continue;
        const double est = kappa_oracle(a, b, grid);
        const bool ok = std::fabs(est - t->value()) <= 0.05;
        ++rep.matchings_checked;
        if (!ok) rep.fail("(" + std::to_string(a) + "," + std::to_string(b) + ")");
        rows.push_back({{"a", a}, {"b", b}, {"table", t->value()}, {"estimate", est}, {"within_0.05", ok}});
      }
    failed = !rep.passed();
    doc["certificates"] = json::array({report_json(rep)});
    doc["n_grid"] = grid;
    doc["table"] = rows;
    write_file(dir / "lemma_kappa.json", doc.dump(2) + "\n");
  } else {
    throw UsageError("--which must be one of identities, ord1, ord2, ord3, ord4, zmatrix, kappa");
  }
  doc["passed"] = !failed;
  std::cout << doc.dump(2) << "\n";
  return failed ? kVerificationFailure : kOk;
}

int cmd_kernel_limit(const RunConfig& c) {
  if (c.beta != 1 && c.beta != 4) throw UsageError("--beta must be 1 or 4");
  if (c.n.empty()) throw UsageError("--n list must be nonempty");
  for (int n : c.n)
    if (n < 2) throw UsageError("--n values must be >= 2");
  if (c.format != "csv" && c.format != "json") throw UsageError("--format must be csv or json");
  const int grid = c.grid.empty() ? 9 : static_cast<int>(parse_grid(c.grid).front());
  if (grid < 2) throw UsageError("--grid must be at least 2 points per axis");
  const std::vector<double> x0s{-1.0, 0.0, 1.0};
  auto csv = csv_stream();
  csv << "n,dev_s,dev_s_yx,dev_v,dev_j,dev_j_over_du,dev_s_sqrt_n,dev_v_n,dev_j_over_du_sqrt_n\n";
  json rows = json::array();
  for (int n : c.n) {
    const KernelLimitRow r = kernel_limit_scan(c.beta, n, grid, x0s, c.epsilon);
    const double rn = std::sqrt(static_cast<double>(n));
    csv << n << ',' << r.dev_s << ',' << r.dev_s_yx << ',' << r.dev_v << ',' << r.dev_j << ',' << r.dev_j_rel << ','
        << r.dev_s * rn << ',' << r.dev_v * n << ',' << r.dev_j_rel * rn << '\n';
    rows.push_back({{"n", n}, {"dev_s", r.dev_s}, {"dev_s_yx", r.dev_s_yx}, {"dev_v", r.dev_v}, {"dev_j", r.dev_j},
                    {"dev_j_over_du", r.dev_j_rel}, {"dev_s_sqrt_n", r.dev_s * rn}, {"dev_v_n", r.dev_v * n},
                    {"dev_j_over_du_sqrt_n", r.dev_j_rel * rn}});
  }
  const std::filesystem::path dir(c.out);
  const std::string stem = "kernel_limit_beta" + std::to_string(c.beta);
  json doc{{"schema_version", kSchemaVersion}, {"config", config_json(c)}, {"x0", x0s}, {"rows", rows}};
  if (c.format == "json")
    write_file(dir / (stem + ".json"), doc.dump(2) + "\n");
  else
    write_file(dir / (stem + ".csv"), csv.str());
  std::cout << doc.dump(2) << "\n";
  return kOk;
}

int cmd_correlation_scan(const RunConfig& c) {
  if (c.beta != 1 && c.beta != 4) throw UsageError("--beta must be 1 or 4");
  if (c.n.empty()) throw UsageError("--n list must be nonempty");
  for (int n : c.n)
    if (n < 2) throw UsageError("--n values must be >= 2");
  if (c.format != "csv" && c.format != "json") throw UsageError("--format must be csv or json");
  const std::vector<double> us = parse_grid(c.grid.empty() ? "0.05:0.3:6" : c.grid);
  for (double u : us)
    if (!(u > 0.0 && u <= 1.0)) throw UsageError("u grid must lie in (0,1]");
  const std::vector<double> small{0.01, 0.02, 0.03, 0.04, 0.05};
  const double coef_limit = c.beta == 4 ? 16.0 * std::pow(std::numbers::pi, 4) / 135.0 : std::numbers::pi * std::numbers::pi / 6.0;
  auto csv = csv_stream();
  csv << "n,u,pfaffian,scaled_density,limit,ratio\n";
  json rows = json::array(), fits = json::array();
  for (int n : c.n) {
    for (const auto& r : correlation_scan(c.beta, n, 0.0, us)) {
      csv << r.n << ',' << r.u << ',' << r.pfaffian << ',' << r.scaled << ',' << r.limit << ',' << r.ratio << '\n';
      rows.push_back({{"n", r.n}, {"u", r.u}, {"pfaffian", r.pfaffian}, {"scaled_density", r.scaled}, {"limit", r.limit}, {"ratio", r.ratio}});
    }
    const double coef = small_u_coefficient(c.beta, n, 0.0, small);
    fits.push_back({{"n", n}, {"coefficient", coef}, {"limit", coef_limit}, {"relative_error", coef / coef_limit - 1.0}});
  }
  const std::filesystem::path dir(c.out);
  const std::string stem = "correlation_scan_beta" + std::to_string(c.beta);
  json doc{{"schema_version", kSchemaVersion}, {"config", config_json(c)}, {"lambda", 0.0}, {"rows", rows}, {"small_u_fit", fits}};
  if (c.format == "json")
    write_file(dir / (stem + ".json"), doc.dump(2) + "\n");
  else
    write_file(dir / (stem + ".csv"), csv.str());
  std::cout << doc.dump(2) << "\n";
  return kOk;
}

}  // namespace

KernelLimitRow kernel_limit_scan(int beta, int n, int grid, const std::vector<double>& x0s, double epsilon) {
  if (beta != 1 && beta != 4) throw std::invalid_argument("kernel_limit_scan: beta must be 1 or 4");
  if (grid < 2) throw std::invalid_argument("kernel_limit_scan: grid must be >= 2");
  KernelLimitRow r;
  r.n = n;
  std::unique_ptr<GseKernel> gse;
  std::unique_ptr<GoeKernel> goe;
  if (beta == 4)
    gse = std::make_unique<GseKernel>(n);
  else
    goe = std::make_unique<GoeKernel>(n);
  for (double x0 : x0s)
    for (int a = 0; a < grid; ++a)
      for (int b = 0; b < grid; ++b) {
        const double u = -1.0 + 2.0 * a / (grid - 1), v = -1.0 + 2.0 * b / (grid - 1);
        const RescaledPoint p{x0, u, v};
        const Eigen::Matrix2d d = gse ? sine_limit_deviation(*gse, p, epsilon) : sine_limit_deviation(*goe, p, epsilon);
        r.dev_s = std::max(r.dev_s, d(0, 0));
        r.dev_v = std::max(r.dev_v, d(0, 1));
        r.dev_j = std::max(r.dev_j, d(1, 0));
        r.dev_s_yx = std::max(r.dev_s_yx, d(1, 1));
        if (a != b) r.dev_j_rel = std::max(r.dev_j_rel, d(1, 0) / std::fabs(u - v));
      }
  return r;
}

std::vector<CorrelationRow> correlation_scan(int beta, int n, double lambda, const std::vector<double>& us) {
  const double c = n * semicircle(lambda);
  std::vector<CorrelationRow> out;
  for (double u : us) {
    CorrelationRow r;
    r.n = n;
    r.u = u;
    r.pfaffian = pf_mii_closed(n, beta, lambda, lambda + u / c);
    r.scaled = r.pfaffian / (c * c);
    r.limit = limiting_gap_density(beta, u);
    r.ratio = r.scaled / r.limit;
    out.push_back(r);
  }
  return out;
}

double small_u_coefficient(int beta, int n, double lambda, const std::vector<double>& us) {
  const auto rows = correlation_scan(beta, n, lambda, us);
  const auto m = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd design(m, 2);
  Eigen::VectorXd rhs(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double u = rows[static_cast<std::size_t>(i)].u;
    design(i, 0) = std::pow(u, beta);
    design(i, 1) = std::pow(u, beta + 2);
    rhs(i) = rows[static_cast<std::size_t>(i)].scaled;
  }
  return design.colPivHouseholderQr().solve(rhs)(0);
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope: need matching sizes >= 2");
  double mx = 0, my = 0;
  const double m = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]) / m;
    my += std::log(y[i]) / m;
  }
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

SampleGapsResult run_sample_gaps(int beta, int n, int trials, std::uint64_t seed, double epsilon, int k, int threads) {
  require_beta(beta);
  SampleGapsResult r;
  r.beta = beta;
  r.n = n;
  r.trials = trials;
  r.k = k;
  r.epsilon = epsilon;
  GapLawSpec spec;
  spec.beta = beta;
  spec.k = k;
  spec.interval = {-2.0 + epsilon, 2.0 - epsilon};
  spec.window = Window{{{0.0, 1.0}}};
  validate(spec);

  std::vector<std::optional<double>> tau(trials);
  std::vector<int> counts(trials, 0);
  parallel_for(
      static_cast<std::size_t>(trials),
      [&](std::size_t d) {
        const Spectrum s = sample_spectrum({beta, n, seed, static_cast<std::uint64_t>(d)});
        const auto g = extract_gaps(s, epsilon);
        tau[d] = tau_k_normalize(g, n, spec);
        counts[d] = count_in_window(g, spec);
      },
      threads);
  for (int d = 0; d < trials; ++d) {
    if (tau[d]) {
      r.draws_with_tau.push_back(d);
      r.tau.push_back(*tau[d]);
    } else {
      ++r.skipped;
    }
  }
  r.counts = counts;
  if (!r.tau.empty()) r.ks = ks_statistic(r.tau, [&](double x) { return tau_k_cdf(beta, k, x); });
  r.mu_theory = theoretical_intensity(spec);
  double sum = 0;
  for (int cnt : counts) sum += cnt;
  r.mu_empirical = sum / trials;
  const PoissonTestResult pt = poisson_count_test(counts, r.mu_theory);
  r.p_poisson = pt.p_value;
  r.chi2 = pt.chi2;
  r.dof = pt.dof;
  return r;
}

int run(int argc, char** argv) {
  CLI::App app{"Smallest-gap statistics for Gaussian beta ensembles"};
  app.require_subcommand(1);
  RunConfig cfg;
  int n_single = 0;

  auto* sg = app.add_subcommand("sample-gaps", "Monte Carlo smallest-gap statistics");
  sg->add_option("--beta", cfg.beta, "1, 2 or 4")->required()->check(CLI::IsMember({1, 2, 4}));
  sg->add_option("--n", n_single, "matrix size")->required();
  sg->add_option("--trials", cfg.trials, "number of draws")->required();
  sg->add_option("--seed", cfg.seed, "generator seed");
  sg->add_option("--epsilon", cfg.epsilon, "bulk margin");
  sg->add_option("--k", cfg.k, "k-th smallest gap");
  sg->add_option("--out", cfg.out, "output directory");
  sg->add_option("--format", cfg.format, "csv or json");

  auto* lv = app.add_subcommand("lemma-verify", "Exhaustive combinatorial certificates");
  lv->add_option("--which", cfg.which, "identities|ord1|ord2|ord3|ord4|zmatrix|kappa")->required();
  cfg.k = 1;
  lv->add_option("--k", cfg.k, "number of pairs");
  lv->add_option("--grid", cfg.grid, "kappa n-grid, comma list");
  lv->add_option("--out", cfg.out, "output directory");

  auto* kl = app.add_subcommand("kernel-limit", "Rescaled kernel vs sine-kernel limit");
  kl->add_option("--beta", cfg.beta, "1 or 4")->check(CLI::IsMember({1, 4}));
  kl->add_option("--n", cfg.n, "comma list of n")->delimiter(',')->required();
  kl->add_option("--grid", cfg.grid, "points per axis on [-1,1]");
  kl->add_option("--epsilon", cfg.epsilon, "bulk margin");
  kl->add_option("--out", cfg.out, "output directory");
  kl->add_option("--format", cfg.format, "csv or json");

  auto* cs = app.add_subcommand("correlation-scan", "Near-diagonal Pfaffian density vs its limit");
  cs->add_option("--beta", cfg.beta, "1 or 4")->check(CLI::IsMember({1, 4}));
  cs->add_option("--n", cfg.n, "comma list of n")->delimiter(',')->required();
  cs->add_option("--grid", cfg.grid, "u grid, start:stop:count or comma list");
  cs->add_option("--out", cfg.out, "output directory");
  cs->add_option("--format", cfg.format, "csv or json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsageError;
  }
  try {
    if (sg->parsed()) {
      cfg.command = "sample-gaps";
      cfg.n = {n_single};
      return cmd_sample_gaps(cfg);
    }
    if (lv->parsed()) {
      cfg.command = "lemma-verify";
      return cmd_lemma_verify(cfg);
    }
    if (kl->parsed()) {
      cfg.command = "kernel-limit";
      return cmd_kernel_limit(cfg);
    }
    cfg.command = "correlation-scan";
    return cmd_correlation_scan(cfg);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsageError;
  }
}

}  // namespace gapforge::cli
