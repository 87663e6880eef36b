#include "stereotest/json_io.hpp"

#include "stereotest/error.hpp"

namespace stereo {

namespace {

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json summary_json(const Summary& s) {
  return {{"n_numeric", s.n_numeric},
          {"n_outside_limits", s.n_outside_limits},
          {"median", optional_number(s.median)},
          {"q1", optional_number(s.q1)},
          {"q3", optional_number(s.q3)}};
}

json comparison_json(const PairedComparison& c) {
  json j{{"name", c.name},
         {"first", {{"test", to_string(c.first_test)}, {"day", c.first_day}}},
         {"second", {{"test", to_string(c.second_test)}, {"day", c.second_day}}},
         {"n_paired", c.n_paired},
         {"n_dropped", c.n_dropped},
         {"n_excluded_from_wilcoxon", c.n_excluded_from_wilcoxon},
         {"weights", to_string(c.weights)},
         {"n_categories", c.n_categories}};
  j["wilcoxon"] = c.wilcoxon ? to_json(*c.wilcoxon) : json(nullptr);
  j["kappa"] = c.kappa ? to_json(*c.kappa) : json(nullptr);
  if (!c.wilcoxon_error.empty()) j["wilcoxon_error"] = c.wilcoxon_error;
  if (!c.kappa_error.empty()) j["kappa_error"] = c.kappa_error;
  return j;
}

Orientation orientation_from(const json& j) {
  const auto o = parse_orientation(j.get<std::string>());
  if (!o) throw Error(ErrorCode::InvalidInput, "bad orientation " + j.dump());
  return *o;
}

}  // namespace

void to_json(json& j, const DisplayProfile& p) {
  j = {{"ppi", p.ppi}, {"width_px", p.width_px}, {"height_px", p.height_px}};
}

void from_json(const json& j, DisplayProfile& p) {
  p.ppi = j.at("ppi").get<double>();
  p.width_px = j.at("width_px").get<int>();
  p.height_px = j.at("height_px").get<int>();
}

void to_json(json& j, const DisparityLevel& level) {
  j = {{"index", level.index},
       {"pixel_shift", level.pixel_shift},
       {"arcsec", level.arcsec},
       {"arcsec_rounded", level.arcsec_rounded}};
}

void from_json(const json& j, DisparityLevel& level) {
  level.index = j.at("index").get<int>();
  level.pixel_shift = j.at("pixel_shift").get<int>();
  level.arcsec = j.at("arcsec").get<double>();
  level.arcsec_rounded = j.at("arcsec_rounded").get<long>();
}

void to_json(json& j, const LevelTable& table) {
  j = {{"distance_m", table.distance_m},
       {"reference_distance_m", table.reference_distance_m},
       {"scale_k", table.scale_k ? json(*table.scale_k) : json(nullptr)},
       {"levels", table.levels}};
}

void from_json(const json& j, LevelTable& table) {
  table.distance_m = j.at("distance_m").get<double>();
  table.reference_distance_m = j.at("reference_distance_m").get<double>();
  const json& k = j.at("scale_k");
  table.scale_k = k.is_null() ? std::nullopt : std::optional<int>(k.get<int>());
  table.levels = j.at("levels").get<std::vector<DisparityLevel>>();
}

void to_json(json& j, const TrialRecord& trial) {
  j = {{"level_index", trial.level_index},
       {"pixel_shift", trial.pixel_shift},
       {"arcsec", trial.arcsec},
       {"presented", to_string(trial.presented)},
       {"response", trial.response ? json(to_string(*trial.response)) : json(nullptr)},
       {"correct", trial.correct},
       {"elapsed_ms", trial.elapsed_ms}};
}

void from_json(const json& j, TrialRecord& trial) {
  trial.level_index = j.at("level_index").get<int>();
  trial.pixel_shift = j.at("pixel_shift").get<int>();
  trial.arcsec = j.at("arcsec").get<double>();
  trial.presented = orientation_from(j.at("presented"));
  const json& r = j.at("response");
  trial.response = r.is_null() ? std::nullopt : std::optional<Orientation>(orientation_from(r));
  trial.correct = j.at("correct").get<bool>();
  trial.elapsed_ms = j.at("elapsed_ms").get<std::int64_t>();
}

json outcome_to_json(const std::optional<Acuity>& outcome) {
  if (!outcome) return nullptr;
  if (outcome->is_outside_limits()) return "OL";
  return outcome->arcsec();
}

std::optional<Acuity> outcome_from_json(const json& j) {
  if (j.is_null()) return std::nullopt;
  if (j.is_string()) return Acuity::parse(j.get<std::string>());
  return Acuity::arcsec(j.get<double>());
}

void to_json(json& j, const SessionRecord& record) {
  j = {{"session_id", record.session_id},
       {"created_at", record.created_at},
       {"profile", record.profile},
       {"distance_m", record.distance_m},
       {"reference_m", record.reference_m},
       {"seed", record.seed},
       {"trials", record.trials},
       {"finished", record.outcome.has_value()},
       {"outcome", outcome_to_json(record.outcome)},
       {"level_table", record.level_table}};
  if (record.outcome && record.outcome->is_numeric()) {
    j["outcome_rounded"] = round_half_up(record.outcome->arcsec());
  }
}

void from_json(const json& j, SessionRecord& record) {
  record.session_id = j.at("session_id").get<std::string>();
  record.created_at = j.at("created_at").get<std::string>();
  record.profile = j.at("profile").get<DisplayProfile>();
  record.distance_m = j.at("distance_m").get<double>();
  record.reference_m = j.at("reference_m").get<double>();
  record.seed = j.at("seed").get<std::uint64_t>();
  record.trials = j.at("trials").get<std::vector<TrialRecord>>();
  record.outcome = outcome_from_json(j.at("outcome"));
  record.level_table = j.at("level_table").get<LevelTable>();
}

json redacted_session_json(const SessionRecord& record) {
  json j = record;
  for (json& trial : j["trials"]) trial.erase("presented");
  j["redacted"] = true;
  return j;
}

json to_json(const WilcoxonResult& w) {
  return {{"n_effective", w.n_effective}, {"n_zero", w.n_zero},     {"w_plus", w.w_plus},
          {"z", w.z},                     {"p_two_sided", w.p_two_sided},
          {"method", to_string(w.method)}};
}

json to_json(const KappaResult& k) {
  return {{"kappa", k.kappa},         {"se", k.se},
          {"ci95_low", k.ci95_low},   {"ci95_high", k.ci95_high},
          {"label", to_string(k.label)}, {"near_band_edge", k.near_band_edge}};
}

json to_json(const AnalysisReport& report) {
  json j;
  j["n_records"] = report.n_records;
  j["summaries"] = json::array();
  for (const DaySummary& s : report.summaries) {
    json row = summary_json(s.summary);
    row["test"] = to_string(s.test);
    row["day"] = s.day;
    j["summaries"].push_back(std::move(row));
  }
  j["between_day"] = json::array();
  for (const auto& c : report.between_day) j["between_day"].push_back(comparison_json(c));
  j["between_instrument"] = json::array();
  for (const auto& c : report.between_instrument) j["between_instrument"].push_back(comparison_json(c));
  j["cumulative"] = json::array();
  for (const CumulativeSeries& c : report.cumulative) {
    j["cumulative"].push_back({{"test", to_string(c.test)},
                               {"day", c.day},
                               {"n_subjects", c.n_subjects},
                               {"percent_at_or_below", c.percent_at_or_below}});
  }
  j["warnings"] = report.warnings;
  return j;
}

json to_json(const DecodeResult& result) {
  const DisparityMap& m = result.map;
  json lags = json::array();
  json conf = json::array();
  for (int r = 0; r < m.rows; ++r) {
    json lag_row = json::array();
    json conf_row = json::array();
    for (int c = 0; c < m.cols; ++c) {
      lag_row.push_back(m.lag_at(c, r));
      conf_row.push_back(m.confidence_at(c, r));
    }
    lags.push_back(std::move(lag_row));
    conf.push_back(std::move(conf_row));
  }
  json j{{"width_px", m.image_width},   {"height_px", m.image_height},
         {"block_px", m.block_px},      {"stride_px", m.stride_px},
         {"cols", m.cols},              {"rows", m.rows},
         {"search_range", m.search_range}, {"pixel_shift", result.pixel_shift}};
  if (result.figure) {
    j["orientation"] = to_string(result.figure->orientation);
    j["template_iou"] = result.figure->template_iou;
    j["figure_center"] = {result.figure->center_x, result.figure->center_y};
    j["figure_radius"] = result.figure->radius;
  } else {
    j["orientation"] = nullptr;
  }
  j["lags"] = std::move(lags);
  j["confidence"] = std::move(conf);
  return j;
}

}  // namespace stereo
