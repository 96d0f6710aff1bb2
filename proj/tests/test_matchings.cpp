#include <doctest.h>

#include <cmath>
#include <set>

#include "gapforge/matchings.hpp"

using namespace gapforge;

namespace {

Matching make(std::vector<std::pair<int, int>> one_based) {
  Matching m;
  for (auto [i, j] : one_based) m.pairs.push_back({i - 1, j - 1});
  m.sign = matching_sign_by_inversions(m);
  return m;
}

const ZBucket* bucket(const ZLemmaReport& r, int a1, int a2, int a3) {
  for (const auto& b : r.buckets)
    if (b.a1 == a1 && b.a2 == a2 && b.a3 == a3) return &b;
  return nullptr;
}

}  // namespace

TEST_SUITE("matchings") {
  TEST_CASE("enumeration counts and signs") {
    CHECK(enumerate_matchings(4, [](const Matching&) {}) == 3u);
    CHECK(enumerate_matchings(8, [](const Matching&) {}) == 105u);
    CHECK(enumerate_matchings(12, [](const Matching&) {}) == 10395u);
    std::set<std::string> seen;
    for (const auto& m : all_matchings(10)) {
      CHECK(m.sign == matching_sign_by_inversions(m));
      seen.insert(m.to_string());
    }
    CHECK(seen.size() == 945u);
    CHECK(make({{1, 2}, {3, 4}}).sign == 1);
    CHECK(make({{1, 3}, {2, 4}}).sign == -1);
    CHECK(make({{1, 4}, {2, 3}}).sign == 1);
    CHECK(make({{1, 3}, {2, 4}}).to_string() == "(1,3)(2,4)");
    CHECK_THROWS_AS(enumerate_matchings(5, [](const Matching&) {}), std::invalid_argument);
    CHECK_THROWS_AS(enumerate_matchings(18, [](const Matching&) {}), std::invalid_argument);
  }

  TEST_CASE("lambda matrix") {
    const Eigen::MatrixXi l = lambda_matrix(make({{1, 2}, {3, 4}}), 4);
    CHECK(l(0, 1) == 1);
    CHECK(l(2, 3) == 1);
    CHECK(l.sum() == 2);
    for (const auto& m : all_matchings(8)) {
      const Eigen::MatrixXi lm = lambda_matrix(m, 8);
      CHECK(lm.sum() == 4);
      const Eigen::MatrixXi sym = lm + lm.transpose();
      for (int i = 0; i < 8; ++i) CHECK(sym.row(i).sum() == 1);
    }
  }

  TEST_CASE("classification examples") {
    const BlockLayout one{1, LayoutVariant::standard_4k};
    const RegimeCounts a = classify(make({{1, 2}, {3, 4}}), one);
    CHECK(a.d1 == 1);
    CHECK(a.d4 == 1);
    CHECK(a.d2() + a.d3 + a.off.total() == 0);
    const RegimeCounts b = classify(make({{1, 3}, {2, 4}}), one);
    CHECK(b.d2() == 1);
    CHECK(b.d3 == 1);
    const RegimeCounts c = classify(make({{1, 5}, {2, 6}, {3, 4}, {7, 8}}), BlockLayout{2, LayoutVariant::standard_4k});
    CHECK(c.off.o1 == 1);
    CHECK(c.off.o41 == 1);
    CHECK(c.d4 == 2);
    CHECK(c.d1 == 0);
    CHECK_THROWS_AS(classify(make({{1, 2}, {3, 4}}), BlockLayout{2, LayoutVariant::standard_4k}), std::invalid_argument);
  }

  TEST_CASE("layouts") {
    CHECK(BlockLayout{3, LayoutVariant::standard_4k}.dim() == 12);
    CHECK(BlockLayout{3, LayoutVariant::extended_4k2}.dim() == 14);
    CHECK(BlockLayout{2, LayoutVariant::extended_4k4}.dim() == 12);
    CHECK(BlockLayout{2, LayoutVariant::extended_4k4}.block_count() == 3);
    CHECK(BlockLayout{2, LayoutVariant::extended_4k2}.locate(9) == std::pair{1, 5});
    CHECK(BlockLayout{2, LayoutVariant::standard_4k}.locate(5) == std::pair{1, 1});
  }

  TEST_CASE("ord values and the kappa table") {
    const BlockLayout one{1, LayoutVariant::standard_4k};
    CHECK(ord1(classify(make({{1, 2}, {3, 4}}), one)) == OrdValue::from_fraction(6, 5));
    CHECK(ord1(classify(make({{1, 3}, {2, 4}}), one)) == OrdValue::from_fraction(6, 5));
    CHECK(OrdValue::from_fraction(12, 5).to_string() == "12/5");
    CHECK(OrdValue{20}.to_string() == "2");
    CHECK(kappa_table(1, 1) == OrdValue::from_fraction(1, 2));
    CHECK(kappa_table(0, 3) == OrdValue::from_fraction(2, 1));
    CHECK(kappa_table(0, 0) == OrdValue{0});
    CHECK_FALSE(kappa_table(1, 3).has_value());
    CHECK_FALSE(kappa_table(2, 3).has_value());
  }

  TEST_CASE("h_sigma is even") {
    const BlockLayout lay{3, LayoutVariant::standard_4k};
    enumerate_matchings(12, [&](const Matching& m) {
      for (int h : h_sigma(m, lay)) REQUIRE(h % 2 == 0);
    });
  }

  TEST_CASE("exhaustive identity and bound reports") {
    for (int k = 1; k <= 3; ++k) {
      for (const auto& r : verify_identities(k)) {
        INFO(r.lemma << " k=" << k << " " << r.layout);
        CHECK(r.matchings_checked > 0);
        if (!r.informational) CHECK(r.passed());
      }
      for (const auto& r : verify_ord_bounds(k)) {
        INFO(r.lemma << " k=" << k << " " << r.layout);
        if (!r.informational) CHECK(r.passed());
      }
    }
    CHECK_THROWS_AS(verify_identities(4), std::invalid_argument);
  }

  TEST_CASE("Z lemma buckets") {
    const ZLemmaReport z = verify_z_lemma();
    CHECK(z.report.passed());
    CHECK(z.x0_size == 209);
    const ZBucket* b012 = bucket(z, 0, 1, 2);
    const ZBucket* b021 = bucket(z, 0, 2, 1);
    const ZBucket* b102 = bucket(z, 1, 0, 2);
    REQUIRE(b012);
    REQUIRE(b021);
    REQUIRE(b102);
    CHECK(OrdValue::from_fraction(15, 2) <= b012->min_weight);
    CHECK(OrdValue{50} <= b021->min_weight);
    CHECK(b102->min_weight == OrdValue{60});
  }

  TEST_CASE("kappa oracle") {
    const std::vector<double> grid = {1e3, 1e4, 1e5, 1e6};
    CHECK(kappa_oracle(0, 2, grid) == doctest::Approx(1.0).epsilon(0.05));
    CHECK(kappa_oracle(1, 1, grid) == doctest::Approx(0.5).epsilon(0.1));
    CHECK(std::fabs(kappa_oracle(0, 0, grid)) < 0.05);
    CHECK(kappa_integral(0, 0, 1e4) == doctest::Approx(2.0 / std::log(1e4)));
    CHECK_THROWS_AS(kappa_oracle(1, 3, grid), std::invalid_argument);
    CHECK_THROWS_AS(kappa_oracle(0, 1, {1e3, 1e4}), std::invalid_argument);
  }
}
