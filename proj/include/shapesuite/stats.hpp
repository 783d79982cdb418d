#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace shapesuite {

/// Equiprobable bucket count heuristic: round(2 * N^(2/5)), at least 2.
int bin_count(int64_t n_samples);

/// Quantile-based discretization of a quantitative variable. Ties go to
/// the lower bin; resulting occupancy slack is reported.
struct QuantizedVariable {
  int k = 0;
  std::vector<double> cut_points;  // k-1 quantile edges
  std::vector<int> codes;          // per-sample bin in [0, k)
  int64_t max_occupancy = 0;
  int64_t min_occupancy = 0;
  bool degenerate = false;  // all mass ended in one bin
};

QuantizedVariable quantize_equiprobable(const std::vector<double>& values,
                                        int k);

struct ContingencyTable {
  int rows = 0;
  int cols = 0;
  std::vector<int64_t> counts;   // rows x cols
  std::vector<double> expected;  // rows x cols
  double chi2 = 0.0;
  int64_t df = 0;
  double p_value = 1.0;
  double min_expected = 0.0;
  bool expected_below_5 = false;
  int collapsed_rows = 0;  // empty rows/cols removed before df
  int collapsed_cols = 0;
};

/// Pearson's chi-square test of independence on two quantized variables.
/// Empty rows and columns (possible under heavy ties) are collapsed
/// before the degrees of freedom are computed.
ContingencyTable contingency_chi_square(const QuantizedVariable& x,
                                        const QuantizedVariable& y);

/// Upper-tail chi-square probability via the regularized incomplete gamma
/// function (series + continued fraction).
double chi_square_p_value(double chi2, double df);

/// Normalized association chi2 / (N * (min(R, C) - 1)), in [0, 1].
/// Undefined (nullopt) for single-row or single-column tables.
std::optional<double> cramers_v(const ContingencyTable& table, int64_t n);

/// Spearman's rank correlation with average ranks on ties. Strictly
/// monotone tie-free data scores exactly +/-1 (integer rank arithmetic).
double spearman_rcc(const std::vector<double>& x,
                    const std::vector<double>& y);

/// Product-moment correlation; linear association only.
double pearson_cc(const std::vector<double>& x, const std::vector<double>& y);

/// Witness that two features are not locally monotone: sample indices
/// (R, E1, E2) realizing one of the two mirrored dominance patterns.
struct WitnessTriple {
  std::array<int, 3> indices{};  // R, E1, E2
  bool condition_a = false;      // else condition B
};

struct WitnessSearchResult {
  std::optional<WitnessTriple> witness;
  bool capped = false;  // candidate cap reached before exhausting triples
};

WitnessSearchResult find_nonmonotone_triple(const std::vector<double>& x,
                                            const std::vector<double>& y,
                                            int64_t candidate_cap = 1000000);

/// Re-evaluates the witness inequalities directly.
bool witness_holds(const std::vector<double>& x, const std::vector<double>& y,
                   const WitnessTriple& w);

enum class PairVerdict {
  kIndependent,
  kDependentNonMonotone,
  kDependentMonotoneGlobalNonMonotoneLocal,
  kCausalRisk,
};

const char* to_string(PairVerdict v);

struct PairwiseReport {
  int feature_a = 0;
  int feature_b = 0;
  std::string name_a;
  std::string name_b;
  double p_value = 1.0;
  bool independent_at_alpha = true;
  std::optional<double> cvi;
  double srcc = 0.0;
  std::string srcc_band;  // poor / moderate / strong
  std::optional<WitnessTriple> witness;
  bool witness_capped = false;
  PairVerdict verdict = PairVerdict::kIndependent;
  double min_expected = 0.0;
  bool expected_below_5 = false;
};

struct SampleMatrix {
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;  // one vector per feature

  int64_t n_samples() const {
    return columns.empty() ? 0 : int64_t(columns[0].size());
  }
  int n_features() const { return int(columns.size()); }
};

struct ValidationReport {
  int64_t n = 0;
  int k = 0;
  double alpha = 0.05;
  double srcc_strong = 0.8;
  bool md_accepted = true;
  std::vector<PairwiseReport> pairs;
};

/// Runs the three-level screen on every feature pair, in order: chi-square
/// independence, rank-correlation strength, then the local
/// non-monotonicity witness. A pair lands at causal-risk only when all
/// three levels point at a possible causal link.
ValidationReport validate_feature_set(const SampleMatrix& m,
                                      double alpha = 0.05,
                                      double srcc_strong = 0.8);

std::string srcc_band(double srcc);

}  // namespace shapesuite
