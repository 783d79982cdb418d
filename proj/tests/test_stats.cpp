#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "shapesuite/stats.hpp"

using namespace shapesuite;

namespace {

// Independent reference for the chi-square upper tail.
// Even df = 2m: closed-form Poisson sum  e^-y * sum_{j<m} y^j / j!.
// Odd df: start at df = 1 (erfc) and add the recurrence term
// y^a e^-y / Gamma(a+1) for a = 1/2, 3/2, ...
double reference_chi_square_p(double chi2, int df) {
  const long double y = chi2 / 2.0L;
  if (df % 2 == 0) {
    const int m = df / 2;
    long double sum = 0.0L;
    long double log_term = -y;  // log of y^j e^-y / j! at j = 0
    for (int j = 0; j < m; ++j) {
      sum += expl(log_term);
      log_term += logl(y) - logl((long double)(j + 1));
    }
    return double(sum);
  }
  long double p = erfcl(sqrtl(y));  // df = 1
  for (int d = 1; d + 2 <= df; d += 2) {
    const long double a = d / 2.0L;
    p += expl(a * logl(y) - y - lgammal(a + 1.0L));
  }
  return double(p);
}

std::vector<double> uniform_vec(std::mt19937_64& rng, size_t n, double lo,
                                double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

// Witness predicate re-written independently for the completeness oracle.
bool oracle_any_witness(const std::vector<double>& x,
                        const std::vector<double>& y) {
  const int n = int(x.size());
  for (int r = 0; r < n; ++r)
    for (int e1 = 0; e1 < n; ++e1)
      for (int e2 = 0; e2 < n; ++e2) {
        if (r == e1 || r == e2 || e1 == e2) continue;
        const bool a = x[e1] > x[r] && y[e1] >= y[r] &&
                       ((x[e2] >= x[r] && y[e2] < y[r]) ||
                        (x[e2] <= x[r] && y[e2] > y[r]));
        const bool b = x[e1] < x[r] && y[e1] <= y[r] &&
                       ((x[e2] <= x[r] && y[e2] > y[r]) ||
                        (x[e2] > x[r] && y[e2] <= y[r]));
        if (a || b) return true;
      }
  return false;
}

}  // namespace

TEST_CASE("bucket count heuristic") {
  CHECK(bin_count(745) == 28);
  CHECK(bin_count(2) == 3);
  CHECK(bin_count(32) == 8);
  CHECK(bin_count(1000) == 32);
  CHECK_THROWS_AS(bin_count(1), std::invalid_argument);
}

TEST_CASE("equiprobable quantization") {
  SUBCASE("1..100 into four even buckets") {
    std::vector<double> v(100);
    for (int i = 0; i < 100; ++i) v[size_t(i)] = i + 1;
    const QuantizedVariable q = quantize_equiprobable(v, 4);
    std::vector<int> occ(4, 0);
    for (int code : q.codes) ++occ[code];
    CHECK(occ == std::vector<int>{25, 25, 25, 25});
    CHECK(q.max_occupancy == 25);
    CHECK(q.min_occupancy == 25);
  }
  SUBCASE("all-equal values collapse into one flagged bucket") {
    const std::vector<double> v(20, 7.0);
    const QuantizedVariable q = quantize_equiprobable(v, 4);
    CHECK(q.degenerate);
    for (int code : q.codes) CHECK(code == q.codes[0]);
  }
  SUBCASE("ties land in the lower bucket, matching a sort-based count") {
    std::vector<double> v;
    for (int i = 0; i < 35; ++i) v.push_back(i);
    for (int i = 0; i < 15; ++i) v.push_back(17.0);  // heavy tie at median
    const QuantizedVariable q = quantize_equiprobable(v, 4);
    // Occupancy oracle: counts below/above each empirical cut.
    std::vector<double> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < int(v.size()); ++i) {
      int expect = 0;
      for (double cut : q.cut_points)
        if (cut < v[size_t(i)]) ++expect;
      CHECK(q.codes[size_t(i)] == expect);
    }
    CHECK(q.max_occupancy - q.min_occupancy >= 0);
  }
  SUBCASE("k larger than the sample count is rejected") {
    const std::vector<double> v{1.0, 2.0};
    CHECK_THROWS_AS(quantize_equiprobable(v, 3), std::invalid_argument);
  }
}

TEST_CASE("chi-square p-value matches the closed-form reference") {
  SUBCASE("every df up to 800") {
    for (int df = 1; df <= 800; ++df) {
      for (double chi2 : {0.5, double(df), 2.0 * df, 2000.0}) {
        chi2 = std::min(chi2, 2000.0);
        const double got = chi_square_p_value(chi2, df);
        const double want = reference_chi_square_p(chi2, df);
        REQUIRE(std::abs(got - want) < 1e-10);
      }
    }
  }
  SUBCASE("dense statistic sweep at key df") {
    for (int df : {1, 2, 27, 729}) {
      for (double chi2 = 0.0; chi2 <= 2000.0; chi2 += 13.7) {
        const double got = chi_square_p_value(chi2, df);
        const double want =
            chi2 <= 0.0 ? 1.0 : reference_chi_square_p(chi2, df);
        REQUIRE(std::abs(got - want) < 1e-10);
      }
    }
  }
}

TEST_CASE("contingency test of independence") {
  std::mt19937_64 rng(1001);
  SUBCASE("a variable is maximally dependent on itself") {
    const std::vector<double> x = uniform_vec(rng, 400, 0.0, 1.0);
    const QuantizedVariable q = quantize_equiprobable(x, 4);
    const ContingencyTable t = contingency_chi_square(q, q);
    CHECK(t.p_value < 1e-12);
    CHECK(t.df == 9);
  }
  SUBCASE("squared dependence is caught while PCC stays near zero") {
    const std::vector<double> x = uniform_vec(rng, 1000, -1.0, 1.0);
    std::vector<double> y(x.size());
    for (size_t i = 0; i < x.size(); ++i) y[i] = x[i] * x[i];
    const int k = bin_count(int64_t(x.size()));
    const ContingencyTable t = contingency_chi_square(
        quantize_equiprobable(x, k), quantize_equiprobable(y, k));
    CHECK(t.p_value < 0.05);
    CHECK(std::abs(pearson_cc(x, y)) < 0.1);
  }
  SUBCASE("independent uniforms are mostly accepted") {
    int rejections = 0;
    for (int trial = 0; trial < 20; ++trial) {
      const std::vector<double> x = uniform_vec(rng, 500, 0.0, 1.0);
      const std::vector<double> y = uniform_vec(rng, 500, 0.0, 1.0);
      const int k = bin_count(500);
      const ContingencyTable t = contingency_chi_square(
          quantize_equiprobable(x, k), quantize_equiprobable(y, k));
      if (t.p_value < 0.05) ++rejections;
    }
    CHECK(rejections <= 4);
  }
  SUBCASE("expected-count margins and collapse bookkeeping") {
    std::vector<double> x = uniform_vec(rng, 200, 0.0, 1.0);
    std::vector<double> y(200, 1.0);
    for (int i = 0; i < 100; ++i) y[size_t(i)] = 0.0;  // two live levels of 4
    const ContingencyTable t = contingency_chi_square(
        quantize_equiprobable(x, 4), quantize_equiprobable(y, 4));
    CHECK(t.cols == 2);
    CHECK(t.collapsed_cols == 2);
    CHECK(t.df == 3);
    double row_total = 0.0;
    for (double e : t.expected) row_total += e;
    CHECK(row_total == doctest::Approx(200.0));
  }
}

TEST_CASE("association normalization") {
  SUBCASE("perfect diagonal is complete association") {
    QuantizedVariable a, b;
    a.k = b.k = 2;
    a.codes = {0, 0, 1, 1, 0, 1, 0, 1};
    b.codes = a.codes;
    const ContingencyTable t = contingency_chi_square(a, b);
    const auto v = cramers_v(t, int64_t(a.codes.size()));
    REQUIRE(v.has_value());
    CHECK(*v == doctest::Approx(1.0));
  }
  SUBCASE("exactly uniform independent table scores zero") {
    QuantizedVariable a, b;
    a.k = b.k = 2;
    a.codes = {0, 0, 1, 1};
    b.codes = {0, 1, 0, 1};
    const ContingencyTable t = contingency_chi_square(a, b);
    CHECK(t.chi2 == doctest::Approx(0.0));
    CHECK(*cramers_v(t, 4) == doctest::Approx(0.0));
  }
  SUBCASE("single-level tables are undefined") {
    QuantizedVariable a, b;
    a.k = 3;
    b.k = 3;
    a.codes = {0, 0, 0, 0};
    b.codes = {0, 1, 2, 1};
    const ContingencyTable t = contingency_chi_square(a, b);
    CHECK(!cramers_v(t, 4).has_value());
  }
}

TEST_CASE("rank correlation") {
  SUBCASE("monotone tie-free data is exactly +/-1") {
    std::vector<double> x, y_cube, y_neg;
    for (int i = -10; i <= 10; ++i) {
      x.push_back(i);
      y_cube.push_back(double(i) * i * i);
      y_neg.push_back(-i);
    }
    CHECK(spearman_rcc(x, y_cube) == 1.0);
    CHECK(spearman_rcc(x, y_neg) == -1.0);
  }
  SUBCASE("invariant under strictly increasing transforms") {
    std::mt19937_64 rng(1013);
    const std::vector<double> x = uniform_vec(rng, 60, 0.0, 4.0);
    const std::vector<double> y = uniform_vec(rng, 60, -1.0, 7.0);
    std::vector<double> xt(x.size()), yt(y.size());
    for (size_t i = 0; i < x.size(); ++i) {
      xt[i] = std::exp(x[i]);
      yt[i] = 3.0 * y[i] + 11.0;
    }
    CHECK(spearman_rcc(x, y) == spearman_rcc(xt, yt));  // exact
  }
  SUBCASE("average ranks under ties") {
    const std::vector<double> x{1, 2, 2, 3};
    const std::vector<double> y{1, 2, 3, 4};
    // Ranks of x: 1, 2.5, 2.5, 4 -- hand-computed Pearson on ranks.
    const double got = spearman_rcc(x, y);
    CHECK(got == doctest::Approx(0.9486832980505138));
  }
  SUBCASE("degenerate inputs throw") {
    CHECK_THROWS_AS(spearman_rcc({1, 1, 1}, {1, 2, 3}), std::invalid_argument);
    CHECK_THROWS_AS(spearman_rcc({1, 2}, {1, 2}), std::invalid_argument);
  }
}

TEST_CASE("product-moment correlation") {
  SUBCASE("affine relation is exactly linear") {
    std::vector<double> x, y;
    for (int i = 0; i < 50; ++i) {
      x.push_back(i);
      y.push_back(2.0 * i + 1.0);
    }
    CHECK(pearson_cc(x, y) == doctest::Approx(1.0));
  }
  SUBCASE("symmetric square relation hides from PCC") {
    std::mt19937_64 rng(1019);
    const std::vector<double> x = uniform_vec(rng, 10000, -1.0, 1.0);
    std::vector<double> y(x.size());
    for (size_t i = 0; i < x.size(); ++i) y[i] = x[i] * x[i];
    CHECK(std::abs(pearson_cc(x, y)) < 0.05);
  }
  SUBCASE("zero variance throws") {
    CHECK_THROWS_AS(pearson_cc({1, 1}, {1, 2}), std::invalid_argument);
  }
}

TEST_CASE("local non-monotonicity witness") {
  SUBCASE("the smallest non-monotone example has a witness") {
    const std::vector<double> x{1, 2, 3};
    const std::vector<double> y{1, 3, 2};
    const WitnessSearchResult res = find_nonmonotone_triple(x, y);
    REQUIRE(res.witness.has_value());
    CHECK(witness_holds(x, y, *res.witness));
    CHECK(oracle_any_witness(x, y));
  }
  SUBCASE("strictly monotone data has none") {
    std::vector<double> x, inc, dec;
    for (int i = 0; i < 12; ++i) {
      x.push_back(i);
      inc.push_back(i * i + 1.0);
      dec.push_back(-3.0 * i);
    }
    CHECK(!find_nonmonotone_triple(x, inc).witness.has_value());
    CHECK(!find_nonmonotone_triple(x, dec).witness.has_value());
  }
  SUBCASE("search agrees with the cubic oracle on random data") {
    std::mt19937_64 rng(1021);
    for (int trial = 0; trial < 30; ++trial) {
      const size_t n = 4 + trial % 12;
      std::vector<double> x = uniform_vec(rng, n, 0.0, 1.0);
      std::vector<double> y = uniform_vec(rng, n, 0.0, 1.0);
      if (trial % 3 == 0) {  // sometimes monotone
        std::sort(x.begin(), x.end());
        y = x;
        for (auto& v : y) v = 2.0 * v + 0.5;
      }
      const WitnessSearchResult res = find_nonmonotone_triple(x, y);
      CHECK(res.witness.has_value() == oracle_any_witness(x, y));
      if (res.witness) CHECK(witness_holds(x, y, *res.witness));
    }
  }
  SUBCASE("cap reports truncation") {
    std::mt19937_64 rng(1031);
    std::vector<double> x = uniform_vec(rng, 40, 0.0, 1.0);
    std::vector<double> y = x;  // monotone: full search needed
    const WitnessSearchResult res = find_nonmonotone_triple(x, y, 100);
    CHECK(res.capped);
    CHECK(!res.witness.has_value());
  }
}

TEST_CASE("feature set screening") {
  std::mt19937_64 rng(1033);
  SUBCASE("duplicate columns are flagged as causal risk") {
    SampleMatrix m;
    m.names = {"a", "b"};
    m.columns.push_back(uniform_vec(rng, 745, 0.0, 1.0));
    m.columns.push_back(m.columns[0]);
    const ValidationReport rep = validate_feature_set(m);
    REQUIRE(rep.pairs.size() == 1);
    CHECK(rep.k == 28);
    CHECK(rep.pairs[0].verdict == PairVerdict::kCausalRisk);
    CHECK(rep.pairs[0].srcc == 1.0);
    CHECK(!rep.md_accepted);
  }
  SUBCASE("squared relation is dependent but non-monotone") {
    SampleMatrix m;
    m.names = {"x", "x_sq"};
    std::vector<double> x = uniform_vec(rng, 1000, -1.0, 1.0);
    std::vector<double> y(x.size());
    std::normal_distribution<double> noise(0.0, 0.01);
    for (size_t i = 0; i < x.size(); ++i) y[i] = x[i] * x[i] + noise(rng);
    m.columns = {x, y};
    const ValidationReport rep = validate_feature_set(m);
    CHECK(rep.pairs[0].verdict == PairVerdict::kDependentNonMonotone);
    CHECK(rep.md_accepted);
  }
  SUBCASE("independent synthetic features mostly read independent") {
    double independent_avg = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
      SampleMatrix m;
      for (int f = 0; f < 7; ++f) {
        m.names.push_back("f" + std::to_string(f));
        m.columns.push_back(uniform_vec(rng, 745, 0.0, 1.0));
      }
      const ValidationReport rep = validate_feature_set(m);
      REQUIRE(rep.pairs.size() == 21);
      int indep = 0;
      for (const auto& p : rep.pairs)
        if (p.verdict == PairVerdict::kIndependent) ++indep;
      independent_avg += indep;
      CHECK(rep.md_accepted);  // random uniforms carry no monotone link
    }
    independent_avg /= 5.0;
    CHECK(independent_avg >= 18.0);
  }
  SUBCASE("monotone dependent pair without local break is causal risk") {
    SampleMatrix m;
    m.names = {"x", "monotone"};
    std::vector<double> x = uniform_vec(rng, 600, 0.0, 1.0);
    std::vector<double> y(x.size());
    for (size_t i = 0; i < x.size(); ++i) y[i] = std::pow(x[i], 3.0);
    m.columns = {x, y};
    const ValidationReport rep = validate_feature_set(m);
    CHECK(rep.pairs[0].verdict == PairVerdict::kCausalRisk);
    CHECK(!rep.md_accepted);
  }
  SUBCASE("non-finite inputs are rejected") {
    SampleMatrix m;
    m.names = {"a", "b"};
    m.columns = {{1.0, 2.0, std::nan(""), 4.0}, {1.0, 2.0, 3.0, 4.0}};
    CHECK_THROWS_AS(validate_feature_set(m), std::invalid_argument);
  }
}
