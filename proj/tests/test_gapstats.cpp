#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "gapforge/gapstats.hpp"
#include "gapforge/quadrature.hpp"

using namespace gapforge;

namespace {

double weight_antiderivative(int beta, double x) {
  if (beta == 4) return 64 * x - 16 * std::pow(x, 3) + 12.0 / 5 * std::pow(x, 5) - std::pow(x, 7) / 7;
  if (beta == 2) return 16 * x - 8.0 / 3 * std::pow(x, 3) + std::pow(x, 5) / 5;
  const double r = std::sqrt(4 - x * x);
  return x * r * r * r / 4 + 1.5 * x * r + 6 * std::asin(x / 2);
}

}  // namespace

TEST_SUITE("gapstats") {
  TEST_CASE("constants and exponents") {
    CHECK(gap_exponent(1) == doctest::Approx(1.5));
    CHECK(gap_exponent(2) == doctest::Approx(4.0 / 3));
    CHECK(gap_exponent(4) == doctest::Approx(1.2));
    CHECK(gap_constant(4) == doctest::Approx(540 * std::numbers::pi * std::numbers::pi));
    CHECK_THROWS_AS(gap_constant(3), std::invalid_argument);
  }

  TEST_CASE("bulk weight against antiderivatives") {
    for (int beta : {1, 2, 4})
      for (auto iv : {std::pair{-1.9, 1.9}, std::pair{-0.5, 1.2}}) {
        const double expect = weight_antiderivative(beta, iv.second) - weight_antiderivative(beta, iv.first);
        CHECK(bulk_weight(beta, iv) == doctest::Approx(expect).epsilon(1e-12));
      }
  }

  TEST_CASE("intensity and normalization") {
    for (int beta : {1, 2, 4}) {
      GapLawSpec spec{beta, 1, {-1.9, 1.9}, Window{{{0.0, 1.0}}}};
      const double w = bulk_weight(beta, spec.interval);
      CHECK(theoretical_intensity(spec) == doctest::Approx(w / ((beta + 1) * gap_constant(beta))).epsilon(1e-13));
      const double t = tau_normalization(beta, spec.interval);
      CHECK(std::pow(t, beta + 1) == doctest::Approx(w / ((beta + 1) * gap_constant(beta))).epsilon(1e-10));
    }
    CHECK_THROWS_AS(validate(GapLawSpec{2, 1, {-2.1, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(validate(GapLawSpec{2, 0}), std::invalid_argument);
    CHECK_THROWS_AS(validate(GapLawSpec{2, 1, {-1.0, 1.0}, Window{}}), std::invalid_argument);
  }

  TEST_CASE("tau_k law") {
    for (int beta : {1, 2, 4})
      for (int k : {1, 2, 4}) {
        for (double x : {0.3, 0.9, 1.4}) {
          const double y = std::pow(x, beta + 1.0);
          double sum = 0.0, term = 1.0;
          for (int j = 0; j < k; ++j) {
            sum += term;
            term *= y / (j + 1);
          }
          CHECK(tau_k_cdf(beta, k, x) == doctest::Approx(1 - std::exp(-y) * sum).epsilon(1e-13));
          const double h = 1e-6;
          const double fd = (tau_k_cdf(beta, k, x + h) - tau_k_cdf(beta, k, x - h)) / (2 * h);
          CHECK(tau_k_density(beta, k, x) == doctest::Approx(fd).epsilon(1e-6));
        }
        QuadOptions opt;
        opt.initial_panels = 16;
        const double mass = integrate([&](double x) { return tau_k_density(beta, k, x); }, 0.0, 6.0, opt).value;
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
      }
    CHECK(tau_k_cdf(2, 1, -1.0) == 0.0);
    CHECK(tau_k_density(2, 1, 0.0) == 0.0);
  }

  TEST_CASE("gap extraction and window counts") {
    EnsembleParams p{2, 8};
    const Spectrum s = make_spectrum({-1.95, -1.0, -0.999, 0.5, 0.6, 1.92, 1.95}, p);
    const auto g = extract_gaps(s);
    REQUIRE(g.size() == 4u);
    CHECK(g[0].location == -1.0);
    CHECK(g[1].raw_gap == doctest::Approx(1.499));
    CHECK(g[0].rescaled_gap == doctest::Approx(std::pow(8.0, 4.0 / 3) * 0.001));
    GapLawSpec spec{2, 1, {-1.5, 1.5}, Window{{{0.0, 1.0}}}};
    CHECK(count_in_window(g, spec) == 1);
    spec.window = Window{{{0.0, 0.01}, {0.5, 1.0}}};
    CHECK(count_in_window(g, spec) == 0);
    spec.k = 2;
    const auto t2 = tau_k_normalize(g, 8, spec);
    REQUIRE(t2.has_value());
    CHECK(*t2 == doctest::Approx(tau_normalization(2, spec.interval) * std::pow(8.0, 4.0 / 3) * 0.1));
    spec.k = 5;
    CHECK_FALSE(tau_k_normalize(g, 8, spec).has_value());
  }

  TEST_CASE("KS statistic") {
    std::mt19937_64 g(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> xs(4000);
    for (double& x : xs) x = std::pow(-std::log(1 - u(g)), 1.0 / 3.0);
    const double d = ks_statistic(xs, [](double x) { return tau_k_cdf(2, 1, x); });
    CHECK(d < 1.36 / std::sqrt(4000.0));
    CHECK(ks_statistic({0.5, 0.5, 0.5}, [](double) { return 0.5; }) == doctest::Approx(0.5));
    CHECK_THROWS_AS(ks_statistic({}, [](double x) { return x; }), std::invalid_argument);
  }

  TEST_CASE("Poisson count test is calibrated") {
    std::mt19937_64 g(11);
    std::poisson_distribution<int> pois(1.3);
    std::vector<double> ps;
    for (int rep = 0; rep < 100; ++rep) {
      std::vector<int> c(1000);
      for (int& x : c) x = pois(g);
      ps.push_back(poisson_count_test(c, 1.3).p_value);
    }
    std::nth_element(ps.begin(), ps.begin() + 50, ps.end());
    CHECK(ps[50] > 0.2);
    CHECK(ps[50] < 0.8);
    std::vector<int> shifted(1000, 3);
    CHECK(poisson_count_test(shifted, 1.3).p_value < 1e-6);
    const auto small = poisson_count_test({0, 0, 1, 0}, 0.2);
    CHECK(small.dof == 0);
    CHECK(small.p_value == 1.0);
    CHECK_THROWS_AS(poisson_count_test({}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(poisson_count_test({1}, 0.0), std::invalid_argument);
  }
}
