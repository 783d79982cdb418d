#include "shapesuite/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace shapesuite {

int bin_count(int64_t n_samples) {
  if (n_samples < 2)
    throw std::invalid_argument("bin_count: need at least 2 samples");
  const int k = int(std::llround(2.0 * std::pow(double(n_samples), 0.4)));
  return std::max(k, 2);
}

QuantizedVariable quantize_equiprobable(const std::vector<double>& values,
                                        int k) {
  const int64_t n = int64_t(values.size());
  if (k < 2) throw std::invalid_argument("quantize_equiprobable: k < 2");
  if (n < k)
    throw std::invalid_argument("quantize_equiprobable: k exceeds sample count");

  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());

  QuantizedVariable q;
  q.k = k;
  q.cut_points.reserve(k - 1);
  for (int i = 1; i < k; ++i)
    q.cut_points.push_back(sorted[size_t(int64_t(i) * n / k - 1)]);

  q.codes.resize(values.size());
  for (size_t s = 0; s < values.size(); ++s) {
    // Number of cut points strictly below the value; ties fall low.
    const auto it = std::lower_bound(q.cut_points.begin(), q.cut_points.end(),
                                     values[s]);
    q.codes[s] = int(it - q.cut_points.begin());
  }

  std::vector<int64_t> occ(k, 0);
  for (int code : q.codes) ++occ[code];
  q.max_occupancy = *std::max_element(occ.begin(), occ.end());
  q.min_occupancy = *std::min_element(occ.begin(), occ.end());
  q.degenerate = std::count_if(occ.begin(), occ.end(),
                               [](int64_t o) { return o > 0; }) <= 1;
  return q;
}

namespace {

// Regularized incomplete gamma, lower series and upper continued fraction.
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < 100000; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-17) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_contfrac(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 100000; ++i) {
    const double an = -double(i) * (double(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-17) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double chi_square_p_value(double chi2, double df) {
  if (df <= 0.0) return 1.0;
  if (chi2 <= 0.0) return 1.0;
  const double a = 0.5 * df;
  const double x = 0.5 * chi2;
  double q;
  if (x < a + 1.0)
    q = 1.0 - gamma_p_series(a, x);
  else
    q = gamma_q_contfrac(a, x);
  return std::clamp(q, 0.0, 1.0);
}

ContingencyTable contingency_chi_square(const QuantizedVariable& x,
                                        const QuantizedVariable& y) {
  if (x.codes.size() != y.codes.size())
    throw std::invalid_argument("contingency_chi_square: size mismatch");
  const int64_t n = int64_t(x.codes.size());

  std::vector<int64_t> raw(size_t(x.k) * y.k, 0);
  for (size_t s = 0; s < x.codes.size(); ++s)
    ++raw[size_t(x.codes[s]) * y.k + y.codes[s]];

  // Collapse empty rows/columns before computing df.
  std::vector<int> live_rows, live_cols;
  for (int r = 0; r < x.k; ++r) {
    int64_t s = 0;
    for (int c = 0; c < y.k; ++c) s += raw[size_t(r) * y.k + c];
    if (s > 0) live_rows.push_back(r);
  }
  for (int c = 0; c < y.k; ++c) {
    int64_t s = 0;
    for (int r = 0; r < x.k; ++r) s += raw[size_t(r) * y.k + c];
    if (s > 0) live_cols.push_back(c);
  }

  ContingencyTable t;
  t.rows = int(live_rows.size());
  t.cols = int(live_cols.size());
  t.collapsed_rows = x.k - t.rows;
  t.collapsed_cols = y.k - t.cols;
  t.counts.resize(size_t(t.rows) * t.cols);
  for (int r = 0; r < t.rows; ++r)
    for (int c = 0; c < t.cols; ++c)
      t.counts[size_t(r) * t.cols + c] =
          raw[size_t(live_rows[r]) * y.k + live_cols[c]];

  std::vector<int64_t> row_sum(t.rows, 0), col_sum(t.cols, 0);
  for (int r = 0; r < t.rows; ++r)
    for (int c = 0; c < t.cols; ++c) {
      row_sum[r] += t.counts[size_t(r) * t.cols + c];
      col_sum[c] += t.counts[size_t(r) * t.cols + c];
    }

  t.expected.resize(t.counts.size());
  t.min_expected = std::numeric_limits<double>::infinity();
  t.chi2 = 0.0;
  for (int r = 0; r < t.rows; ++r) {
    for (int c = 0; c < t.cols; ++c) {
      const double e = double(row_sum[r]) * double(col_sum[c]) / double(n);
      t.expected[size_t(r) * t.cols + c] = e;
      t.min_expected = std::min(t.min_expected, e);
      const double o = double(t.counts[size_t(r) * t.cols + c]);
      t.chi2 += (o - e) * (o - e) / e;
    }
  }
  if (!std::isfinite(t.min_expected)) t.min_expected = 0.0;
  t.expected_below_5 = t.min_expected < 5.0;
  t.df = int64_t(t.rows - 1) * (t.cols - 1);
  t.p_value = chi_square_p_value(t.chi2, double(t.df));
  return t;
}

std::optional<double> cramers_v(const ContingencyTable& table, int64_t n) {
  const int m = std::min(table.rows, table.cols);
  if (m < 2 || n <= 0) return std::nullopt;
  const double v = table.chi2 / (double(n) * double(m - 1));
  return std::clamp(v, 0.0, 1.0);
}

namespace {

std::vector<double> average_ranks(const std::vector<double>& v) {
  const size_t n = v.size();
  std::vector<size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
    if (v[a] != v[b]) return v[a] < v[b];
    return a < b;
  });
  std::vector<double> rank(n, 0.0);
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double avg = 0.5 * (double(i + 1) + double(j + 1));
    for (size_t t = i; t <= j; ++t) rank[idx[t]] = avg;
    i = j + 1;
  }
  return rank;
}

bool has_ties(const std::vector<double>& v) {
  std::vector<double> s = v;
  std::sort(s.begin(), s.end());
  return std::adjacent_find(s.begin(), s.end()) != s.end();
}

}  // namespace

double spearman_rcc(const std::vector<double>& x,
                    const std::vector<double>& y) {
  const size_t n = x.size();
  if (n != y.size()) throw std::invalid_argument("spearman_rcc: size mismatch");
  if (n < 3) throw std::invalid_argument("spearman_rcc: need at least 3 samples");

  if (!has_ties(x) && !has_ties(y)) {
    // Tie-free shortcut in integer arithmetic: exact +/-1 on strictly
    // monotone data.
    std::vector<double> rx = average_ranks(x), ry = average_ranks(y);
    int64_t d2 = 0;
    for (size_t i = 0; i < n; ++i) {
      const int64_t d = int64_t(rx[i]) - int64_t(ry[i]);
      d2 += d * d;
    }
    const int64_t nn = int64_t(n);
    return 1.0 - 6.0 * double(d2) / (double(nn) * double(nn * nn - 1));
  }

  std::vector<double> rx = average_ranks(x), ry = average_ranks(y);
  return pearson_cc(rx, ry);
}

double pearson_cc(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t n = x.size();
  if (n != y.size()) throw std::invalid_argument("pearson_cc: size mismatch");
  if (n < 2) throw std::invalid_argument("pearson_cc: need at least 2 samples");
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= double(n);
  my /= double(n);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0)
    throw std::invalid_argument("pearson_cc: zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

namespace {

bool condition_a(double xr, double yr, double x1, double y1, double x2,
                 double y2) {
  return (x1 > xr && y1 >= yr) &&
         ((x2 >= xr && y2 < yr) || (x2 <= xr && y2 > yr));
}

bool condition_b(double xr, double yr, double x1, double y1, double x2,
                 double y2) {
  return (x1 < xr && y1 <= yr) &&
         ((x2 <= xr && y2 > yr) || (x2 > xr && y2 <= yr));
}

}  // namespace

bool witness_holds(const std::vector<double>& x, const std::vector<double>& y,
                   const WitnessTriple& w) {
  const auto [r, e1, e2] = w.indices;
  if (w.condition_a)
    return condition_a(x[r], y[r], x[e1], y[e1], x[e2], y[e2]);
  return condition_b(x[r], y[r], x[e1], y[e1], x[e2], y[e2]);
}

WitnessSearchResult find_nonmonotone_triple(const std::vector<double>& x,
                                            const std::vector<double>& y,
                                            int64_t candidate_cap) {
  WitnessSearchResult res;
  const int n = int(x.size());
  if (n != int(y.size()))
    throw std::invalid_argument("find_nonmonotone_triple: size mismatch");
  if (n < 3) return res;

  int64_t examined = 0;
  for (int r = 0; r < n; ++r) {
    for (int e1 = 0; e1 < n; ++e1) {
      if (e1 == r) continue;
      for (int e2 = 0; e2 < n; ++e2) {
        if (e2 == r || e2 == e1) continue;
        if (++examined > candidate_cap) {
          res.capped = true;
          return res;
        }
        if (condition_a(x[r], y[r], x[e1], y[e1], x[e2], y[e2])) {
          res.witness = WitnessTriple{{r, e1, e2}, true};
          return res;
        }
        if (condition_b(x[r], y[r], x[e1], y[e1], x[e2], y[e2])) {
          res.witness = WitnessTriple{{r, e1, e2}, false};
          return res;
        }
      }
    }
  }
  return res;
}

const char* to_string(PairVerdict v) {
  switch (v) {
    case PairVerdict::kIndependent:
      return "independent";
    case PairVerdict::kDependentNonMonotone:
      return "dependent-nonmonotone";
    case PairVerdict::kDependentMonotoneGlobalNonMonotoneLocal:
      return "dependent-monotone-global-nonmonotone-local";
    case PairVerdict::kCausalRisk:
      return "causal-risk";
  }
  return "unknown";
}

std::string srcc_band(double srcc) {
  const double a = std::abs(srcc);
  if (a < 0.4) return "poor";
  if (a < 0.8) return "moderate";
  return "strong";
}

ValidationReport validate_feature_set(const SampleMatrix& m, double alpha,
                                      double srcc_strong) {
  if (m.n_features() < 2)
    throw std::invalid_argument("validate_feature_set: need >= 2 features");
  const int64_t n = m.n_samples();
  for (const auto& col : m.columns) {
    if (int64_t(col.size()) != n)
      throw std::invalid_argument("validate_feature_set: ragged columns");
    for (double v : col)
      if (!std::isfinite(v))
        throw std::invalid_argument("validate_feature_set: non-finite input");
  }

  ValidationReport report;
  report.n = n;
  report.k = bin_count(n);
  report.alpha = alpha;
  report.srcc_strong = srcc_strong;

  std::vector<QuantizedVariable> quantized;
  quantized.reserve(m.columns.size());
  for (const auto& col : m.columns)
    quantized.push_back(quantize_equiprobable(col, report.k));

  for (int i = 0; i < m.n_features(); ++i) {
    for (int j = i + 1; j < m.n_features(); ++j) {
      PairwiseReport pair;
      pair.feature_a = i;
      pair.feature_b = j;
      pair.name_a = m.names.empty() ? std::to_string(i) : m.names[i];
      pair.name_b = m.names.empty() ? std::to_string(j) : m.names[j];

      const ContingencyTable table =
          contingency_chi_square(quantized[i], quantized[j]);
      pair.p_value = table.p_value;
      pair.min_expected = table.min_expected;
      pair.expected_below_5 = table.expected_below_5;
      pair.cvi = cramers_v(table, n);
      pair.independent_at_alpha = table.p_value >= alpha;

      try {
        pair.srcc = spearman_rcc(m.columns[i], m.columns[j]);
        pair.srcc_band = srcc_band(pair.srcc);
      } catch (const std::invalid_argument&) {
        pair.srcc = 0.0;
        pair.srcc_band = "undefined";
      }

      if (pair.independent_at_alpha) {
        pair.verdict = PairVerdict::kIndependent;
      } else if (std::abs(pair.srcc) < srcc_strong) {
        pair.verdict = PairVerdict::kDependentNonMonotone;
      } else {
        const WitnessSearchResult search =
            find_nonmonotone_triple(m.columns[i], m.columns[j]);
        pair.witness = search.witness;
        pair.witness_capped = search.capped;
        pair.verdict =
            search.witness
                ? PairVerdict::kDependentMonotoneGlobalNonMonotoneLocal
                : PairVerdict::kCausalRisk;
      }
      if (pair.verdict == PairVerdict::kCausalRisk) report.md_accepted = false;
      report.pairs.push_back(std::move(pair));
    }
  }
  return report;
}

}  // namespace shapesuite
