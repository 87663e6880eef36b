#include "stereotest/report.hpp"

#include <iomanip>
#include <sstream>

namespace stereo {

namespace {

std::string fixed(double v, int digits) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(digits) << v;
  std::string text = out.str();
  // Tiny negatives would otherwise print as "-0.000".
  if (text.find_first_not_of("-0.") == std::string::npos && text.front() == '-') text.erase(0, 1);
  return text;
}

std::string median_cell(const Summary& s) {
  if (!s.median) return "-";
  return fixed(*s.median, 1) + " [" + fixed(*s.q1, 1) + " to " + fixed(*s.q3, 1) + "]";
}

std::string wilcoxon_cell(const PairedComparison& c) {
  if (!c.wilcoxon) return "n/a";
  return "z=" + fixed(c.wilcoxon->z, 3) + ", p=" + fixed(c.wilcoxon->p_two_sided, 3) + " (" +
         std::string(to_string(c.wilcoxon->method)) + ", n=" +
         std::to_string(c.wilcoxon->n_effective) + ")";
}

std::string kappa_cell(const PairedComparison& c) {
  if (!c.kappa) return "n/a";
  return fixed(c.kappa->kappa, 3) + " [" + fixed(c.kappa->ci95_low, 3) + ", " +
         fixed(c.kappa->ci95_high, 3) + "] " + std::string(to_string(c.kappa->label)) + " (" +
         std::string(to_string(c.weights)) + ")";
}

const PairedComparison* between_day_for(const AnalysisReport& report, TestKind test) {
  for (const auto& c : report.between_day) {
    if (c.first_test == test) return &c;
  }
  return nullptr;
}

}  // namespace

std::string format_report_text(const AnalysisReport& report) {
  std::ostringstream out;
  out << std::left;
  out << "Reproducibility between days\n";
  out << std::setw(9) << "Test" << std::setw(5) << "Day" << std::setw(5) << "n" << std::setw(5)
      << "OL" << std::setw(26) << "Median [IQR] (arcsec)" << std::setw(40) << "Wilcoxon"
      << "Weighted kappa [95% CI]\n";
  for (TestKind test : kAllTests) {
    const PairedComparison* cmp = between_day_for(report, test);
    bool first_row = true;
    for (const DaySummary& s : report.summaries) {
      if (s.test != test) continue;
      out << std::setw(9) << (first_row ? std::string(to_string(test)) : "") << std::setw(5)
          << s.day << std::setw(5) << s.summary.n_numeric << std::setw(5)
          << s.summary.n_outside_limits << std::setw(26) << median_cell(s.summary);
      if (first_row && cmp) {
        out << std::setw(40) << wilcoxon_cell(*cmp) << kappa_cell(*cmp);
      }
      out << '\n';
      first_row = false;
    }
  }

  if (!report.between_instrument.empty()) {
    out << "\nAgreement between instruments\n";
    out << std::setw(26) << "Comparison" << std::setw(8) << "pairs" << std::setw(40)
        << "Wilcoxon" << "Weighted kappa [95% CI]\n";
    for (const auto& c : report.between_instrument) {
      out << std::setw(26) << c.name << std::setw(8) << c.n_paired << std::setw(40)
          << wilcoxon_cell(c) << kappa_cell(c) << '\n';
    }
  }

  out << "\nCumulative percentage of subjects at or below each ordinal level\n";
  for (const CumulativeSeries& c : report.cumulative) {
    out << std::setw(9) << to_string(c.test) << "day " << c.day << ':';
    for (double pct : c.percent_at_or_below) out << ' ' << std::right << std::setw(6) << fixed(pct, 1);
    out << std::left << '\n';
  }

  if (!report.warnings.empty()) {
    out << "\nWarnings\n";
    for (const auto& w : report.warnings) out << "  - " << w << '\n';
  }
  return out.str();
}

}  // namespace stereo
