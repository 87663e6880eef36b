#pragma once

#include <json.hpp>

#include "stereotest/geometry.hpp"
#include "stereotest/oracle.hpp"
#include "stereotest/staircase.hpp"
#include "stereotest/stats.hpp"

namespace stereo {

using json = nlohmann::json;

void to_json(json& j, const DisplayProfile& p);
void from_json(const json& j, DisplayProfile& p);
void to_json(json& j, const DisparityLevel& level);
void from_json(const json& j, DisparityLevel& level);
void to_json(json& j, const LevelTable& table);
void from_json(const json& j, LevelTable& table);
void to_json(json& j, const TrialRecord& trial);
void from_json(const json& j, TrialRecord& trial);
void to_json(json& j, const SessionRecord& record);
void from_json(const json& j, SessionRecord& record);

/// null (no outcome), "OL", or a number of arcsec.
json outcome_to_json(const std::optional<Acuity>& outcome);
std::optional<Acuity> outcome_from_json(const json& j);

/// Same record with every presented orientation removed; used while a
/// session is still running.
json redacted_session_json(const SessionRecord& record);

json to_json(const WilcoxonResult& w);
json to_json(const KappaResult& k);
json to_json(const AnalysisReport& report);

/// Lags and confidences as row-major nested arrays plus the decoded figure.
json to_json(const DecodeResult& result);

}  // namespace stereo
