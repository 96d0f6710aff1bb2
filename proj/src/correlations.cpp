#include "gapforge/correlations.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <numbers>
#include <stdexcept>

#include "gapforge/quadrature.hpp"
#include "gapforge/special_functions.hpp"

namespace gapforge {
namespace {

constexpr double kPi = std::numbers::pi;

void check_beta(int beta) {
  if (beta != 1 && beta != 4) {
    throw std::invalid_argument("correlations: beta must be 1 or 4");
  }
}

void check_points(const std::vector<double>& pts, double eps) {
  for (double p : pts) {
    if (!(p > -2.0 + eps && p < 2.0 - eps)) {
      throw std::invalid_argument("correlations: point outside the bulk");
    }
  }
}

// Kernel entries between a fixed set of points; per-point data is prepared
// once and J values are memoized per ordered pair.
class JkTable {
 public:
  JkTable(int beta, int n, const std::vector<double>& pts) : beta_(beta) {
    if (beta == 4) {
      gse_ = std::make_unique<GseKernel>(n);
      for (double p : pts) gse_pts_.push_back(gse_->point(p));
    } else {
      goe_ = std::make_unique<GoeKernel>(n);
      for (double p : pts) goe_pts_.push_back(goe_->point(p));
    }
  }

  // S(p_i, p_j), including alpha(p_i) for beta = 1.
  double s(int i, int j) const {
    if (beta_ == 4) return gse_->s(gse_pts_[i], gse_pts_[j]);
    return goe_->s(goe_pts_[i], goe_pts_[j]) + goe_->alpha(goe_pts_[i]);
  }
  double v(int i, int j) const {
    if (beta_ == 4) return gse_->v(gse_pts_[i], gse_pts_[j]);
    return goe_->v(goe_pts_[i], goe_pts_[j]);
  }
  double j(int i, int j) {
    if (i == j) return 0.0;
    const bool flip = i > j;
    const auto key = flip ? std::make_pair(j, i) : std::make_pair(i, j);
    auto it = j_cache_.find(key);
    if (it == j_cache_.end()) {
      const double val = beta_ == 4
                             ? gse_->j(gse_pts_[key.first], gse_pts_[key.second])
                             : goe_->j(goe_pts_[key.first], goe_pts_[key.second]);
      it = j_cache_.emplace(key, val).first;
    }
    return flip ? -it->second : it->second;
  }

  // Skew matrix over the selected point indices, filled from the upper
  // triangle of the JK blocks.
  SkewMatrix matrix(const std::vector<int>& idx) {
    const int m = static_cast<int>(idx.size());
    SkewMatrix out(2 * m);
    for (int a = 0; a < m; ++a) {
      out.set(2 * a, 2 * a + 1, s(idx[a], idx[a]));
      for (int b = a + 1; b < m; ++b) {
        const int pi = idx[a], pj = idx[b];
        out.set(2 * a, 2 * b, j(pi, pj));
        out.set(2 * a, 2 * b + 1, s(pj, pi));
        out.set(2 * a + 1, 2 * b, -s(pi, pj));
        out.set(2 * a + 1, 2 * b + 1, -v(pi, pj));
      }
    }
    return out;
  }

 private:
  int beta_;
  std::unique_ptr<GseKernel> gse_;
  std::unique_ptr<GoeKernel> goe_;
  std::vector<GseKernel::Point> gse_pts_;
  std::vector<GoeKernel::Point> goe_pts_;
  std::map<std::pair<int, int>, double> j_cache_;
};

}  // namespace

double Window::measure() const { return moment(0.0); }

double Window::moment(double p) const {
  double total = 0.0;
  for (const auto& [a, b] : intervals) {
    if (!(a >= 0.0 && b >= a)) {
      throw std::invalid_argument("Window: intervals must satisfy 0 <= a <= b");
    }
    total += (std::pow(b, p + 1.0) - std::pow(a, p + 1.0)) / (p + 1.0);
  }
  return total;
}

std::vector<double> configuration_points(const GapConfiguration& cfg,
                                         const std::vector<double>& extras) {
  std::vector<double> pts;
  for (const auto& [l, x] : cfg.pairs) {
    pts.push_back(l);
    pts.push_back(x);
  }
  pts.insert(pts.end(), extras.begin(), extras.end());
  return pts;
}

std::vector<int> diagonal_block_sizes(const GapConfiguration& cfg,
                                      const std::vector<double>& extras) {
  std::vector<int> sizes(cfg.pairs.size(), 4);
  if (!extras.empty()) {
    if (sizes.empty()) {
      sizes.push_back(0);
    }
    sizes.back() += 2 * static_cast<int>(extras.size());
  }
  return sizes;
}

SkewMatrix assemble_correlation_matrix(const GapConfiguration& cfg,
                                       const std::vector<double>& extras) {
  check_beta(cfg.beta);
  const std::vector<double> pts = configuration_points(cfg, extras);
  if (pts.empty()) throw std::invalid_argument("correlations: no points");
  check_points(pts, cfg.epsilon);
  JkTable table(cfg.beta, cfg.n, pts);
  std::vector<int> idx(pts.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
  return table.matrix(idx);
}

double pfaffian_diagonal_part(const SkewMatrix& m, const std::vector<int>& blocks) {
  double prod = 1.0;
  int start = 0;
  for (int size : blocks) {
    prod *= pfaffian_numeric(m.block(start, size));
    start += size;
  }
  if (start != m.dim()) {
    throw std::invalid_argument("pfaffian_diagonal_part: block sizes do not cover the matrix");
  }
  return prod;
}

CorrelationValue rho(const GapConfiguration& cfg, const std::vector<double>& extras,
                     PfaffianPath path) {
  const SkewMatrix m = assemble_correlation_matrix(cfg, extras);
  CorrelationValue out;
  if (path == PfaffianPath::kCombinatorial) {
    if (m.dim() > 12) {
      throw std::invalid_argument("rho: combinatorial path limited to 6 points");
    }
    out.total = pfaffian_combinatorial(m);
  } else {
    out.total = pfaffian_numeric(m);
  }
  out.diag_part = pfaffian_diagonal_part(m, diagonal_block_sizes(cfg, extras));
  out.offdiag_part = out.total - out.diag_part;
  return out;
}

double pf_mii_closed(int n, int beta, double lambda, double x) {
  check_beta(beta);
  JkTable t(beta, n, {lambda, x});
  return t.s(0, 0) * t.s(1, 1) - t.s(0, 1) * t.s(1, 0) + t.j(0, 1) * t.v(0, 1);
}

double limiting_gap_density(int beta, double u) {
  if (u < 0.0) throw std::invalid_argument("limiting_gap_density: u must be >= 0");
  if (beta == 4) {
    const double k = sine_kernel(2.0 * u);
    return 1.0 - k * k +
           2.0 * sine_kernel_deriv(2.0 * u) * 0.5 * sine_kernel_integral(2.0 * u);
  }
  const double k = sine_kernel(u);
  if (beta == 1) {
    return 1.0 - k * k + sine_kernel_deriv(u) * (sine_kernel_integral(u) - 0.5);
  }
  if (beta == 2) return 1.0 - k * k;
  throw std::invalid_argument("limiting_gap_density: beta must be 1, 2 or 4");
}

SkewMatrix round1_transform(const SkewMatrix& m, const GapConfiguration& cfg) {
  const int k = static_cast<int>(cfg.pairs.size());
  if (m.dim() < 4 * k) {
    throw std::invalid_argument("round1_transform: matrix smaller than 4k");
  }
  // Row operations R; the congruence is R M R^T = A^T M A with A = R^T.
  Eigen::MatrixXd step1 = Eigen::MatrixXd::Identity(m.dim(), m.dim());
  Eigen::MatrixXd step2 = Eigen::MatrixXd::Identity(m.dim(), m.dim());
  for (int i = 0; i < k; ++i) {
    const int r = 4 * i;
    step1(r, r + 1) = cfg.pairs[i].first - cfg.pairs[i].second;
    step2(r + 2, r) = -1.0;
    step2(r + 3, r + 1) = -1.0;
  }
  const Eigen::MatrixXd rows = step2 * step1;
  return congruence_transform(m, rows.transpose());
}

SkewMatrix round2_transform(const SkewMatrix& m, int n, double exponent) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(m.dim(), m.dim());
  const double up = std::pow(static_cast<double>(n), 0.5 * exponent);
  for (int i = 0; i < m.dim(); ++i) d(i, i) = (i % 2 == 0) ? up : 1.0 / up;
  return congruence_transform(m, d);
}

double l_kn_numeric(int n, int beta, int k, const std::vector<double>& lambdas,
                    const Window& window, double epsilon) {
  check_beta(beta);
  if (k < 1 || k > 2 || static_cast<int>(lambdas.size()) != k) {
    throw std::invalid_argument("l_kn_numeric: need 1 <= k <= 2 locations");
  }
  if (k == 2 && std::abs(lambdas[0] - lambdas[1]) < 1.0 / std::log(n)) {
    throw std::invalid_argument("l_kn_numeric: locations closer than 1/log n");
  }
  if (window.intervals.empty()) return 0.0;

  const double scale = std::pow(static_cast<double>(n), -gap_exponent(beta));
  const GaussRule rule = gauss_legendre(64);
  // Per axis: nodes (absolute positions) and weights.
  std::vector<double> nodes, weights;
  for (const auto& [a, b] : window.intervals) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      nodes.push_back(c + h * rule.nodes[q]);
      weights.push_back(h * rule.weights[q] * scale);
    }
  }
  const int g = static_cast<int>(nodes.size());
  std::vector<double> pts(lambdas.begin(), lambdas.end());
  for (int i = 0; i < k; ++i) {
    for (int q = 0; q < g; ++q) pts.push_back(lambdas[i] + scale * nodes[q]);
  }
  check_points(pts, epsilon);
  JkTable table(beta, n, pts);
  auto grid = [&](int axis, int q) { return k + axis * g + q; };

  double total = 0.0;
  if (k == 1) {
    for (int q = 0; q < g; ++q) {
      total += weights[q] * pfaffian_numeric(table.matrix({0, grid(0, q)}));
    }
  } else {
    for (int q1 = 0; q1 < g; ++q1) {
      double inner = 0.0;
      for (int q2 = 0; q2 < g; ++q2) {
        inner += weights[q2] *
                 pfaffian_numeric(table.matrix({0, grid(0, q1), 1, grid(1, q2)}));
      }
      total += weights[q1] * inner;
    }
  }
  return total;
}

double l_kn_limit(int beta, const std::vector<double>& lambdas, const Window& window) {
  const double a = window.moment(beta) / gap_constant(beta);
  double prod = 1.0;
  for (double l : lambdas) prod *= a * std::pow(2.0 * kPi * semicircle(l), beta + 2);
  return prod;
}

}  // namespace gapforge
