#ifndef GAPFORGE_MATCHINGS_HPP
#define GAPFORGE_MATCHINGS_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace gapforge {

// Canonical perfect matching on {0,..,dim-1}: pairs (i,j) with i<j, sorted by
// first element. sign is the sign of the permutation (i1 j1 i2 j2 ...).
struct Matching {
  std::vector<std::pair<int, int>> pairs;
  int sign = 1;
  int dim() const { return 2 * static_cast<int>(pairs.size()); }
  std::string to_string() const;  // 1-based, e.g. "(1,3)(2,4)"
};

// Streams all (two_n-1)!! canonical matchings. Returns the count.
// Throws std::invalid_argument for odd, non-positive or > 16 sizes.
std::uint64_t enumerate_matchings(int two_n, const std::function<void(const Matching&)>& visit);
std::vector<Matching> all_matchings(int two_n);

// Permutation parity by inversion count; independent of the enumeration sign.
int matching_sign_by_inversions(const Matching& m);

// Upper-triangular 0-1 matrix with Lambda(i,j)=1 iff (i,j) is a pair.
Eigen::MatrixXi lambda_matrix(const Matching& m, int dim);

enum class LayoutVariant { standard_4k, extended_4k2, extended_4k4, goe_4k };

// standard_4k / goe_4k: k blocks of 4. extended_4k2: k blocks, the last of
// size 6. extended_4k4: k+1 blocks of 4, block 2 holding the (z1,z2) pair.
struct BlockLayout {
  int k = 1;
  LayoutVariant variant = LayoutVariant::standard_4k;

  int dim() const;
  int block_count() const;
  // 0-based block and in-block position of a 0-based index.
  std::pair<int, int> locate(int index) const;
};

const char* to_string(LayoutVariant v);

struct OffCounts {
  int o1 = 0, o2 = 0, o3 = 0, o41 = 0, o42 = 0, o51 = 0, o52 = 0, o6 = 0;

  int o4() const { return o41 + o42; }
  int o5() const { return o51 + o52; }
  int total() const { return o1 + o2 + o3 + o4() + o5() + o6; }
  OffCounts operator-(const OffCounts& r) const;
  OffCounts operator+(const OffCounts& r) const;
  bool operator==(const OffCounts& r) const;
};

struct RegimeCounts {
  int d1 = 0, d21 = 0, d22 = 0, d3 = 0, d4 = 0;
  int d51 = 0, d52 = 0, d53 = 0, d54 = 0, d55 = 0, d6 = 0;
  OffCounts off;    // all 4x4 off-diagonal blocks
  OffCounts bar;    // block pair (1,2) only; extended_4k4
  OffCounts prime;  // complement of bar; extended_4k4
  int o71 = 0, o72 = 0, o8 = 0, o91 = 0, o92 = 0, o93 = 0, o94 = 0, o10 = 0;

  int d2() const { return d21 + d22; }
  int d5() const { return d51 + d52 + d53 + d54 + d55; }
  int o7() const { return o71 + o72; }
  int o9() const { return o91 + o92 + o93 + o94; }
  int extended_off_total() const { return o7() + o8 + o9() + o10; }
  // Every O regime (4x4 and 4x2 blocks) empty.
  bool is_diagonal() const { return off.total() == 0 && extended_off_total() == 0; }
};

// Assigns every 1-entry of Lambda to exactly one regime. Throws
// std::invalid_argument on dimension mismatch and std::logic_error on an
// entry that fits no regime.
RegimeCounts classify(const Matching& m, const BlockLayout& layout);

// Exact rational with denominator 10.
struct OrdValue {
  long tenths = 0;

  double value() const { return tenths / 10.0; }
  std::string to_string() const;  // reduced fraction
  static OrdValue from_fraction(long num, long den);
  friend bool operator==(OrdValue a, OrdValue b) { return a.tenths == b.tenths; }
  friend bool operator<(OrdValue a, OrdValue b) { return a.tenths < b.tenths; }
  friend bool operator<=(OrdValue a, OrdValue b) { return a.tenths <= b.tenths; }
  friend OrdValue operator+(OrdValue a, OrdValue b) { return {a.tenths + b.tenths}; }
  friend OrdValue operator-(OrdValue a, OrdValue b) { return {a.tenths - b.tenths}; }
};

// Table of kappa(a,b); nullopt outside the filled cells.
std::optional<OrdValue> kappa_table(int a, int b);

OrdValue ord1(const RegimeCounts& c);
OrdValue ord2(const RegimeCounts& c);
// nullopt when (Y1,Y2) falls outside the kappa table.
std::optional<OrdValue> ord3(const RegimeCounts& c);
OrdValue ord4(const RegimeCounts& c);

int y1(const RegimeCounts& c);
int y2(const RegimeCounts& c);
// Weighted sums with weights 3/2 O3, 2 O42, 5/2 O2, 3 O52, 4 O6, 5 O51,
// 6 O41 (the right side of the Ord1 equivalence).
OrdValue y3_weighted(const OffCounts& o);
OrdValue y3(const RegimeCounts& c);
OrdValue y3_bar(const RegimeCounts& c);
OrdValue y3_prime(const RegimeCounts& c);
// Y3 with the O2 and O51 weights exchanged (uncorrected variant).
OrdValue y3_literal(const RegimeCounts& c);

// Number of Lambda entries with exactly one endpoint in each block.
std::vector<int> h_sigma(const Matching& m, const BlockLayout& layout);

struct LemmaReport {
  std::string lemma;
  int k = 0;
  std::string layout;
  std::uint64_t matchings_checked = 0;
  std::uint64_t counterexample_count = 0;
  std::vector<std::string> counterexamples;  // first few, human readable
  std::vector<std::string> notes;
  bool informational = false;  // literal-text variants: failures are expected

  bool passed() const { return counterexample_count == 0; }
  void fail(const std::string& what);
};

// Counting identities for the 4k layout (cons1-cons4, addid) and for the
// 4k+2 layout (2cons1-2cons4 and the 6(k+1)/5 combination). k in [1,3].
std::vector<LemmaReport> verify_identities(int k);

// Exhaustive Ord bounds and supporting lemmas: ord1/ord4 on 4k, ord2 on
// 4k+2, ord3 on 4k+4. k in [1,3].
std::vector<LemmaReport> verify_ord_bounds(int k);

// Fitted exponent kappa for the model integral over the grid of n values.
// Throws std::invalid_argument for (a,b) outside {0,1,2}x{0..3} or equal to
// (1,3), (2,3), and for a grid with fewer than 3 points.
double kappa_oracle(int a, int b, const std::vector<double>& n_grid);

// Exact integral of (sqrt(n)+min(n,1/|x|))^a min(n,1/|x|)^b over |x|<1/log n.
double kappa_integral(int a, int b, double n);

struct ZBucket {
  int a1 = 0, a2 = 0, a3 = 0;
  int count = 0;
  OrdValue min_weight;  // min over the bucket of sum Z(i,j) X(i,j)
};

struct ZLemmaReport {
  LemmaReport report;
  int x0_size = 0;
  std::vector<ZBucket> buckets;
};

ZLemmaReport verify_z_lemma();

}  // namespace gapforge

#endif
