#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "stereotest/types.hpp"

namespace stereo {

enum class TestKind { HD, ST_far, ST_near, TNO };

inline constexpr TestKind kAllTests[] = {TestKind::HD, TestKind::ST_far, TestKind::ST_near,
                                         TestKind::TNO};

std::string_view to_string(TestKind test) noexcept;
std::optional<TestKind> parse_test_kind(std::string_view text) noexcept;
bool is_near_test(TestKind test) noexcept;

struct MeasurementRecord {
  std::string subject_id;
  TestKind test = TestKind::HD;
  int day = 1;
  Acuity value = Acuity::outside_limits();

  friend bool operator==(const MeasurementRecord&, const MeasurementRecord&) = default;
};

inline constexpr int kNearCategories = 5;
inline constexpr int kFarCategories = 11;

/// Near ordinal 1..5. The value is first snapped to the nearest published near
/// test level, then banded 15-60 / 79-120 / 159-240 / 278-480; OL is 5.
int recode_near(const Acuity& value);

/// Far ordinal 1..11 on the rounded value; OL and anything above 66 is 11.
int recode_far(const Acuity& value);

/// Raw-number variants; negative or out-of-range input throws UnmappableValue.
int recode_near(double arcsec);
int recode_far(double arcsec);

/// Recoding used for a given test (near tests use recode_near).
int recode(TestKind test, const Acuity& value);
int category_count(TestKind test) noexcept;

class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(int n_categories);
  /// Counts from 1-based (row, col) category pairs.
  static ConfusionMatrix from_pairs(int n_categories, std::span<const std::pair<int, int>> pairs);

  int size() const noexcept { return n_; }
  long& at(int row, int col);  // 0-based
  long at(int row, int col) const;
  long total() const noexcept;
  ConfusionMatrix transposed() const;

 private:
  int n_;
  std::vector<long> counts_;
};

enum class KappaWeights { Linear, Quadratic };
std::string_view to_string(KappaWeights weights) noexcept;

enum class AgreementBand { Poor, Slight, Fair, Moderate, Substantial, AlmostPerfect };
std::string_view to_string(AgreementBand band) noexcept;

/// Landis-Koch band of kappa rounded to two decimals (negative kappa is Poor).
AgreementBand landis_koch(double kappa);
/// True when kappa lies within 0.01 of a band edge (0, .20, .40, .60, .80).
bool near_band_edge(double kappa);

struct KappaResult {
  double kappa = 0.0;
  double se = 0.0;
  double ci95_low = 0.0;
  double ci95_high = 0.0;
  AgreementBand label = AgreementBand::Poor;
  bool near_band_edge = false;
};

/// Weighted Cohen's kappa with the Fleiss-Cohen-Everitt asymptotic standard
/// error. The 95% interval is kappa +- 1.96 se, clipped to [-1, 1].
KappaResult weighted_kappa(const ConfusionMatrix& matrix, KappaWeights weights);

enum class WilcoxonMethod { Exact, NormalApprox };
std::string_view to_string(WilcoxonMethod method) noexcept;

inline constexpr int kWilcoxonExactMaxN = 12;

struct WilcoxonResult {
  int n_effective = 0;
  int n_zero = 0;
  double w_plus = 0.0;
  double z = 0.0;  // (W+ - n(n+1)/4) / sigma, no continuity correction
  double p_two_sided = 1.0;
  WilcoxonMethod method = WilcoxonMethod::Exact;
};

/// Signed-rank test on d = second - first. Zero differences are dropped, ties
/// get mid-ranks. Exact enumeration for n <= 12 without tied |d|; otherwise the
/// tie-corrected normal approximation with a 0.5 continuity correction on p.
/// Passing a method overrides that choice.
WilcoxonResult wilcoxon(std::span<const std::pair<double, double>> pairs,
                        std::optional<WilcoxonMethod> method = std::nullopt);

/// Quantile by linear interpolation between order statistics (R type 7).
double quantile_type7(std::span<const double> sorted, double p);

struct Summary {
  int n_numeric = 0;
  int n_outside_limits = 0;
  std::optional<double> median;
  std::optional<double> q1;
  std::optional<double> q3;
};

Summary summarize(std::span<const Acuity> values);

struct DaySummary {
  TestKind test = TestKind::HD;
  int day = 1;
  Summary summary;
};

struct PairedComparison {
  std::string name;
  TestKind first_test = TestKind::HD;
  int first_day = 1;
  TestKind second_test = TestKind::HD;
  int second_day = 2;
  int n_paired = 0;              // subjects with both sides present
  int n_dropped = 0;             // subjects missing one side
  int n_excluded_from_wilcoxon = 0;  // pairs with an OL side
  std::optional<WilcoxonResult> wilcoxon;
  std::string wilcoxon_error;
  KappaWeights weights = KappaWeights::Linear;
  int n_categories = 0;
  std::optional<KappaResult> kappa;
  std::string kappa_error;
};

struct CumulativeSeries {
  TestKind test = TestKind::HD;
  int day = 1;
  int n_subjects = 0;
  std::vector<double> percent_at_or_below;  // index L-1 for ordinal level L
};

struct AnalysisReport {
  int n_records = 0;
  std::vector<DaySummary> summaries;
  std::vector<PairedComparison> between_day;
  std::vector<PairedComparison> between_instrument;
  std::vector<CumulativeSeries> cumulative;
  std::vector<std::string> warnings;
};

/// Medians per test and day plus paired comparisons (between days, and between
/// instruments on day 1). Kappa works on the recoded ordinal values.
AnalysisReport analyze(std::span<const MeasurementRecord> records);

}  // namespace stereo
