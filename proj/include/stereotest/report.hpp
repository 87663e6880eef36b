#pragma once

#include <string>

#include "stereotest/stats.hpp"

namespace stereo {

/// Aligned plain-text rendering of an AnalysisReport.
std::string format_report_text(const AnalysisReport& report);

}  // namespace stereo
