#include "stereotest/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "stereotest/error.hpp"
#include "stereotest/geometry.hpp"

namespace stereo {

namespace {

// Every level printed for the near tests (both ST rounding candidates for the
// fifth step are listed).
constexpr double kNearLevels[] = {15,  30,  40,  60,  79,  119, 120, 159, 198,
                                  199, 238, 240, 278, 318, 357, 397, 480};
constexpr double kNearBandUpper[] = {60, 120, 240, 480};
constexpr long kFarBandUpper[] = {9, 17, 23, 29, 36, 43, 49, 55, 62, 66};
constexpr double kKappaZ = 1.96;

double weight(int i, int j, int n, KappaWeights scheme) {
  const double d = std::abs(i - j) / static_cast<double>(n - 1);
  return scheme == KappaWeights::Linear ? 1.0 - d : 1.0 - d * d;
}

}  // namespace

std::string_view to_string(TestKind test) noexcept {
  switch (test) {
    case TestKind::HD: return "HD";
    case TestKind::ST_far: return "ST_far";
    case TestKind::ST_near: return "ST_near";
    case TestKind::TNO: return "TNO";
  }
  return "HD";
}

std::optional<TestKind> parse_test_kind(std::string_view text) noexcept {
  for (TestKind t : kAllTests) {
    if (text == to_string(t)) return t;
  }
  return std::nullopt;
}

bool is_near_test(TestKind test) noexcept {
  return test == TestKind::ST_near || test == TestKind::TNO;
}

int recode_near(double arcsec) {
  if (!(arcsec >= 0.0) || arcsec > kNearLevels[std::size(kNearLevels) - 1]) {
    throw Error(ErrorCode::UnmappableValue,
                "near value " + std::to_string(arcsec) + " outside 0-480 arcsec");
  }
  double snapped = kNearLevels[0];
  for (double level : kNearLevels) {
    if (std::abs(level - arcsec) < std::abs(snapped - arcsec)) snapped = level;
  }
  int band = 1;
  while (snapped > kNearBandUpper[band - 1]) ++band;
  return band;
}

int recode_near(const Acuity& value) {
  return value.is_outside_limits() ? kNearCategories : recode_near(value.arcsec());
}

int recode_far(double arcsec) {
  if (!(arcsec >= 0.0)) {
    throw Error(ErrorCode::UnmappableValue, "far value " + std::to_string(arcsec) + " < 0");
  }
  const long rounded = round_half_up(arcsec);
  for (int band = 0; band < static_cast<int>(std::size(kFarBandUpper)); ++band) {
    if (rounded <= kFarBandUpper[band]) return band + 1;
  }
  return kFarCategories;
}

int recode_far(const Acuity& value) {
  return value.is_outside_limits() ? kFarCategories : recode_far(value.arcsec());
}

int recode(TestKind test, const Acuity& value) {
  return is_near_test(test) ? recode_near(value) : recode_far(value);
}

int category_count(TestKind test) noexcept {
  return is_near_test(test) ? kNearCategories : kFarCategories;
}

ConfusionMatrix::ConfusionMatrix(int n_categories) : n_(n_categories) {
  if (n_categories < 2) throw Error(ErrorCode::InvalidInput, "need at least 2 categories");
  counts_.assign(static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_), 0);
}

ConfusionMatrix ConfusionMatrix::from_pairs(int n_categories,
                                            std::span<const std::pair<int, int>> pairs) {
  ConfusionMatrix m(n_categories);
  for (const auto& [a, b] : pairs) m.at(a - 1, b - 1) += 1;
  return m;
}

long& ConfusionMatrix::at(int row, int col) {
  if (row < 0 || col < 0 || row >= n_ || col >= n_) {
    throw Error(ErrorCode::InvalidInput, "confusion matrix index out of range");
  }
  return counts_[static_cast<std::size_t>(row * n_ + col)];
}

long ConfusionMatrix::at(int row, int col) const {
  return const_cast<ConfusionMatrix*>(this)->at(row, col);
}

long ConfusionMatrix::total() const noexcept {
  return std::accumulate(counts_.begin(), counts_.end(), 0L);
}

ConfusionMatrix ConfusionMatrix::transposed() const {
  ConfusionMatrix t(n_);
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) t.at(j, i) = at(i, j);
  }
  return t;
}

std::string_view to_string(KappaWeights weights) noexcept {
  return weights == KappaWeights::Linear ? "linear" : "quadratic";
}

std::string_view to_string(AgreementBand band) noexcept {
  switch (band) {
    case AgreementBand::Poor: return "Poor";
    case AgreementBand::Slight: return "Slight";
    case AgreementBand::Fair: return "Fair";
    case AgreementBand::Moderate: return "Moderate";
    case AgreementBand::Substantial: return "Substantial";
    case AgreementBand::AlmostPerfect: return "Almost Perfect";
  }
  return "Poor";
}

AgreementBand landis_koch(double kappa) {
  if (kappa < 0.0) return AgreementBand::Poor;
  const long hundredths = round_half_up(kappa * 100.0);
  if (hundredths <= 20) return AgreementBand::Slight;
  if (hundredths <= 40) return AgreementBand::Fair;
  if (hundredths <= 60) return AgreementBand::Moderate;
  if (hundredths <= 80) return AgreementBand::Substantial;
  return AgreementBand::AlmostPerfect;
}

bool near_band_edge(double kappa) {
  for (double edge : {0.0, 0.2, 0.4, 0.6, 0.8}) {
    if (std::abs(kappa - edge) <= 0.01) return true;
  }
  return false;
}

KappaResult weighted_kappa(const ConfusionMatrix& matrix, KappaWeights scheme) {
  const int n = matrix.size();
  const long total = matrix.total();
  if (total <= 0) throw Error(ErrorCode::InvalidInput, "confusion matrix is empty");

  std::vector<double> p(static_cast<std::size_t>(n * n));
  std::vector<double> row(static_cast<std::size_t>(n), 0.0);
  std::vector<double> col(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (matrix.at(i, j) < 0) throw Error(ErrorCode::InvalidInput, "negative count");
      const double pij = static_cast<double>(matrix.at(i, j)) / static_cast<double>(total);
      p[static_cast<std::size_t>(i * n + j)] = pij;
      row[static_cast<std::size_t>(i)] += pij;
      col[static_cast<std::size_t>(j)] += pij;
    }
  }

  double observed = 0.0;
  double expected = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double w = weight(i, j, n, scheme);
      observed += w * p[static_cast<std::size_t>(i * n + j)];
      expected += w * row[static_cast<std::size_t>(i)] * col[static_cast<std::size_t>(j)];
    }
  }
  const double denom = 1.0 - expected;
  if (std::abs(denom) < 1e-15) {
    throw Error(ErrorCode::DegenerateMarginals, "chance agreement is 1; kappa undefined");
  }
  const double kappa = (observed - expected) / denom;

  // Fleiss, Cohen & Everitt (1969) large-sample variance.
  std::vector<double> row_mean_w(static_cast<std::size_t>(n), 0.0);
  std::vector<double> col_mean_w(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double w = weight(i, j, n, scheme);
      row_mean_w[static_cast<std::size_t>(i)] += col[static_cast<std::size_t>(j)] * w;
      col_mean_w[static_cast<std::size_t>(j)] += row[static_cast<std::size_t>(i)] * w;
    }
  }
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double dev = weight(i, j, n, scheme) -
                         (row_mean_w[static_cast<std::size_t>(i)] +
                          col_mean_w[static_cast<std::size_t>(j)]) * (1.0 - kappa);
      acc += p[static_cast<std::size_t>(i * n + j)] * dev * dev;
    }
  }
  const double tail = kappa - expected * (1.0 - kappa);
  const double variance = (acc - tail * tail) / (static_cast<double>(total) * denom * denom);

  KappaResult result;
  result.kappa = kappa;
  result.se = std::sqrt(std::max(variance, 0.0));
  result.ci95_low = std::max(-1.0, kappa - kKappaZ * result.se);
  result.ci95_high = std::min(1.0, kappa + kKappaZ * result.se);
  result.label = landis_koch(kappa);
  result.near_band_edge = near_band_edge(kappa);
  return result;
}

std::string_view to_string(WilcoxonMethod method) noexcept {
  return method == WilcoxonMethod::Exact ? "exact" : "normal_approx";
}

WilcoxonResult wilcoxon(std::span<const std::pair<double, double>> pairs,
                        std::optional<WilcoxonMethod> method) {
  if (pairs.empty()) throw Error(ErrorCode::InvalidInput, "no pairs");
  std::vector<double> diffs;
  WilcoxonResult result;
  for (const auto& [first, second] : pairs) {
    const double d = second - first;
    if (d == 0.0) {
      ++result.n_zero;
    } else {
      diffs.push_back(d);
    }
  }
  const int n = static_cast<int>(diffs.size());
  if (n == 0) throw Error(ErrorCode::NoEffectivePairs, "all differences are zero");
  result.n_effective = n;

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return std::abs(diffs[static_cast<std::size_t>(a)]) < std::abs(diffs[static_cast<std::size_t>(b)]);
  });

  std::vector<double> rank(static_cast<std::size_t>(n));
  double tie_term = 0.0;
  bool has_ties = false;
  for (int start = 0; start < n;) {
    int end = start + 1;
    const double magnitude = std::abs(diffs[static_cast<std::size_t>(order[start])]);
    while (end < n && std::abs(diffs[static_cast<std::size_t>(order[end])]) == magnitude) ++end;
    const double mid = (start + 1 + end) / 2.0;
    for (int k = start; k < end; ++k) rank[static_cast<std::size_t>(order[k])] = mid;
    const double t = end - start;
    if (t > 1) {
      has_ties = true;
      tie_term += t * t * t - t;
    }
    start = end;
  }

  for (int i = 0; i < n; ++i) {
    if (diffs[static_cast<std::size_t>(i)] > 0) result.w_plus += rank[static_cast<std::size_t>(i)];
  }
  const double nn = n;
  const double mean = nn * (nn + 1.0) / 4.0;
  const double sigma = std::sqrt(nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0 - tie_term / 48.0);
  result.z = sigma > 0.0 ? (result.w_plus - mean) / sigma : 0.0;

  const bool exact_ok = !has_ties && n <= 30;
  if (method == WilcoxonMethod::Exact && !exact_ok) {
    throw Error(ErrorCode::InvalidInput, "exact p needs at most 30 untied differences");
  }
  const bool use_exact = method ? *method == WilcoxonMethod::Exact
                                : n <= kWilcoxonExactMaxN && !has_ties;
  if (use_exact) {
    // Null distribution of W+ by counting sign assignments over ranks 1..n.
    const int max_w = n * (n + 1) / 2;
    std::vector<double> ways(static_cast<std::size_t>(max_w + 1), 0.0);
    ways[0] = 1.0;
    for (int r = 1; r <= n; ++r) {
      for (int w = max_w; w >= r; --w) ways[static_cast<std::size_t>(w)] += ways[static_cast<std::size_t>(w - r)];
    }
    const double all = std::ldexp(1.0, n);
    const int observed = static_cast<int>(std::lround(result.w_plus));
    double lower = 0.0;
    double upper = 0.0;
    for (int w = 0; w <= max_w; ++w) {
      if (w <= observed) lower += ways[static_cast<std::size_t>(w)];
      if (w >= observed) upper += ways[static_cast<std::size_t>(w)];
    }
    result.p_two_sided = std::min(1.0, 2.0 * std::min(lower, upper) / all);
    result.method = WilcoxonMethod::Exact;
  } else {
    const double corrected = std::max(0.0, std::abs(result.w_plus - mean) - 0.5);
    result.p_two_sided = sigma > 0.0 ? std::erfc(corrected / sigma / std::sqrt(2.0)) : 1.0;
    result.method = WilcoxonMethod::NormalApprox;
  }
  return result;
}

double quantile_type7(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw Error(ErrorCode::InvalidInput, "quantile of an empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::InvalidInput, "quantile p outside [0, 1]");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

Summary summarize(std::span<const Acuity> values) {
  Summary s;
  std::vector<double> numeric;
  for (const Acuity& v : values) {
    if (v.is_outside_limits()) {
      ++s.n_outside_limits;
    } else {
      numeric.push_back(v.arcsec());
    }
  }
  s.n_numeric = static_cast<int>(numeric.size());
  if (!numeric.empty()) {
    std::sort(numeric.begin(), numeric.end());
    s.median = quantile_type7(numeric, 0.5);
    s.q1 = quantile_type7(numeric, 0.25);
    s.q3 = quantile_type7(numeric, 0.75);
  }
  return s;
}

namespace {

using SeriesKey = std::pair<TestKind, int>;
using Series = std::map<std::string, Acuity>;  // subject -> value

PairedComparison compare(const std::map<SeriesKey, Series>& data, std::string name,
                         SeriesKey first, SeriesKey second, KappaWeights weights,
                         std::vector<std::string>& warnings) {
  PairedComparison cmp;
  cmp.name = std::move(name);
  cmp.first_test = first.first;
  cmp.first_day = first.second;
  cmp.second_test = second.first;
  cmp.second_day = second.second;
  cmp.weights = weights;
  cmp.n_categories = category_count(first.first);

  static const Series kEmpty;
  const auto lookup = [&](const SeriesKey& key) -> const Series& {
    auto it = data.find(key);
    return it == data.end() ? kEmpty : it->second;
  };
  const Series& a = lookup(first);
  const Series& b = lookup(second);

  std::set<std::string> subjects;
  for (const auto& [id, _] : a) subjects.insert(id);
  for (const auto& [id, _] : b) subjects.insert(id);

  std::vector<std::pair<double, double>> numeric;
  std::vector<std::pair<int, int>> ordinal;
  for (const std::string& id : subjects) {
    auto ia = a.find(id);
    auto ib = b.find(id);
    if (ia == a.end() || ib == b.end()) {
      ++cmp.n_dropped;
      continue;
    }
    ++cmp.n_paired;
    ordinal.emplace_back(recode(first.first, ia->second), recode(second.first, ib->second));
    if (ia->second.is_numeric() && ib->second.is_numeric()) {
      numeric.emplace_back(ia->second.arcsec(), ib->second.arcsec());
    } else {
      ++cmp.n_excluded_from_wilcoxon;
    }
  }

  if (numeric.empty()) {
    cmp.wilcoxon_error = "no pairs with numeric values on both sides";
  } else {
    try {
      cmp.wilcoxon = wilcoxon(numeric);
    } catch (const Error& e) {
      cmp.wilcoxon_error = e.what();
    }
  }
  if (ordinal.empty()) {
    cmp.kappa_error = "no paired subjects";
  } else {
    try {
      cmp.kappa = weighted_kappa(ConfusionMatrix::from_pairs(cmp.n_categories, ordinal), weights);
    } catch (const Error& e) {
      cmp.kappa_error = e.what();
    }
  }
  if (!cmp.wilcoxon_error.empty()) warnings.push_back(cmp.name + ": Wilcoxon " + cmp.wilcoxon_error);
  if (!cmp.kappa_error.empty()) warnings.push_back(cmp.name + ": kappa " + cmp.kappa_error);
  return cmp;
}

KappaWeights weights_for(TestKind test) {
  return is_near_test(test) ? KappaWeights::Quadratic : KappaWeights::Linear;
}

}  // namespace

AnalysisReport analyze(std::span<const MeasurementRecord> records) {
  if (records.empty()) throw Error(ErrorCode::InvalidInput, "no measurement records");

  AnalysisReport report;
  report.n_records = static_cast<int>(records.size());
  std::map<SeriesKey, Series> data;
  for (const MeasurementRecord& r : records) {
    if (r.day != 1 && r.day != 2) {
      throw Error(ErrorCode::InvalidInput, "day must be 1 or 2 (subject " + r.subject_id + ")");
    }
    auto [it, inserted] = data[{r.test, r.day}].emplace(r.subject_id, r.value);
    if (!inserted) {
      report.warnings.push_back("duplicate " + std::string(to_string(r.test)) + " day " +
                                std::to_string(r.day) + " for subject " + r.subject_id +
                                "; first value kept");
    }
  }
  const auto present = [&](TestKind t) {
    return data.contains({t, 1}) || data.contains({t, 2});
  };

  for (TestKind test : kAllTests) {
    for (int day : {1, 2}) {
      auto it = data.find({test, day});
      if (it == data.end()) continue;
      std::vector<Acuity> values;
      for (const auto& [_, v] : it->second) values.push_back(v);
      report.summaries.push_back({test, day, summarize(values)});

      CumulativeSeries series;
      series.test = test;
      series.day = day;
      series.n_subjects = static_cast<int>(values.size());
      std::vector<int> counts(static_cast<std::size_t>(category_count(test)), 0);
      for (const Acuity& v : values) ++counts[static_cast<std::size_t>(recode(test, v) - 1)];
      int running = 0;
      for (int c : counts) {
        running += c;
        series.percent_at_or_below.push_back(100.0 * running / series.n_subjects);
      }
      report.cumulative.push_back(std::move(series));
    }
  }

  for (TestKind test : kAllTests) {
    if (!present(test)) continue;
    report.between_day.push_back(compare(data, std::string(to_string(test)) + " day 1 vs day 2",
                                         {test, 1}, {test, 2}, weights_for(test),
                                         report.warnings));
  }
  if (present(TestKind::ST_near) && present(TestKind::TNO)) {
    report.between_instrument.push_back(compare(data, "ST_near vs TNO (day 1)",
                                                {TestKind::ST_near, 1}, {TestKind::TNO, 1},
                                                KappaWeights::Quadratic, report.warnings));
  }
  if (present(TestKind::ST_far) && present(TestKind::HD)) {
    report.between_instrument.push_back(compare(data, "ST_far vs HD (day 1)",
                                                {TestKind::ST_far, 1}, {TestKind::HD, 1},
                                                KappaWeights::Linear, report.warnings));
  }
  return report;
}

}  // namespace stereo
