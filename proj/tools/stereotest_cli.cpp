#include <CLI11.hpp>

#include <cstdint>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "stereotest/dataset.hpp"
#include "stereotest/error.hpp"
#include "stereotest/geometry.hpp"
#include "stereotest/json_io.hpp"
#include "stereotest/oracle.hpp"
#include "stereotest/png_io.hpp"
#include "stereotest/renderer.hpp"
#include "stereotest/report.hpp"
#include "stereotest/service.hpp"
#include "stereotest/session_store.hpp"
#include "stereotest/staircase.hpp"
#include "stereotest/stats.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitWarnings = 1;
constexpr int kExitUsage = 2;

struct ProfileArgs {
  std::optional<double> ppi;
  std::string preset;
  int width_px = 2048;
  int height_px = 1536;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--ppi", ppi, "Screen pixel density (pixels per inch)");
    cmd->add_option("--preset", preset, "Named display: ipad-retina-264, ipad-mini-326");
    cmd->add_option("--width", width_px, "Display width in pixels");
    cmd->add_option("--height", height_px, "Display height in pixels");
  }

  stereo::DisplayProfile resolve() const {
    stereo::DisplayProfile profile{0.0, width_px, height_px};
    if (!preset.empty()) {
      auto p = stereo::display_preset(preset);
      if (!p) throw stereo::Error(stereo::ErrorCode::InvalidProfile, "unknown preset " + preset);
      profile = *p;
    }
    if (ppi) profile.ppi = *ppi;
    if (preset.empty() && !ppi) {
      throw stereo::Error(stereo::ErrorCode::InvalidProfile, "give --ppi or --preset");
    }
    stereo::validate(profile);
    return profile;
  }
};

int cmd_levels(const ProfileArgs& args, double distance, int n, double reference,
               const std::string& format) {
  const auto profile = args.resolve();
  const auto table = stereo::build_level_table(profile, distance, n, reference);
  if (format == "json") {
    std::cout << stereo::json(table).dump(2) << '\n';
    return kExitOk;
  }
  std::cout << "distance " << distance << " m, " << profile.ppi << " ppi";
  if (table.scale_k) std::cout << ", k = " << *table.scale_k;
  std::cout << "\nlevel  shift_px  arcsec\n";
  for (const auto& level : table.levels) {
    std::cout << std::setw(5) << level.index << std::setw(10) << level.pixel_shift
              << std::setw(8) << level.arcsec_rounded << "   (" << level.arcsec << ")\n";
  }
  return kExitOk;
}

int cmd_render(const ProfileArgs& args, double distance, int level, int n,
               const std::string& orientation, std::uint64_t seed, double coverage,
               const std::string& out) {
  const auto profile = args.resolve();
  const auto table = stereo::build_level_table(profile, distance, n);
  const auto o = stereo::parse_orientation(orientation);
  if (!o) throw stereo::Error(stereo::ErrorCode::InvalidInput, "bad orientation " + orientation);
  auto spec = stereo::make_stereogram_spec(profile, table, level, *o, seed);
  spec.dot_coverage = coverage;
  stereo::write_png(out, stereo::render(spec));
  std::cout << stereo::json{{"out", out},
                            {"level", table.level(level)},
                            {"orientation", stereo::to_string(*o)},
                            {"seed", seed}}
                   .dump()
            << '\n';
  return kExitOk;
}

int cmd_decode(const std::string& input, int search_range, std::optional<int> block) {
  const auto image = stereo::read_png(input);
  stereo::DecoderOptions options;
  options.search_range = search_range;
  options.block_px = block;
  try {
    std::cout << stereo::to_json(stereo::decode(image, options)).dump() << '\n';
  } catch (const stereo::Error& e) {
    if (e.code() != stereo::ErrorCode::LowConfidence) throw;
    std::cout << stereo::json{{"error", stereo::to_string(e.code())}, {"message", e.what()}}.dump()
              << '\n';
    return kExitWarnings;
  }
  return kExitOk;
}

int cmd_simulate(const ProfileArgs& args, const std::string& observer_text, double distance,
                 int n, std::uint64_t seed, int runs) {
  if (runs < 1) throw stereo::Error(stereo::ErrorCode::InvalidInput, "--runs must be >= 1");
  const auto profile = args.resolve();
  const auto table = stereo::build_level_table(profile, distance, n);
  stereo::json records = stereo::json::array();
  std::map<std::string, int> distribution;
  double total_trials = 0.0;
  for (int r = 0; r < runs; ++r) {
    const auto observer = stereo::parse_observer(observer_text, seed + static_cast<std::uint64_t>(r));
    auto record = stereo::simulate(observer, table, profile, seed + static_cast<std::uint64_t>(r));
    record.session_id = stereo::new_session_id();
    record.created_at = stereo::utc_timestamp_now();
    const std::string key = record.outcome->is_outside_limits()
                                ? "OL"
                                : std::to_string(stereo::round_half_up(record.outcome->arcsec()));
    ++distribution[key];
    total_trials += static_cast<double>(record.trials.size());
    records.push_back(record);
  }
  stereo::json summary{{"runs", runs},
                       {"outcome_distribution", distribution},
                       {"mean_trials", total_trials / runs}};
  std::cout << stereo::json{{"sessions", records}, {"summary", summary}}.dump() << '\n';
  return kExitOk;
}

int cmd_analyze(const std::string& input, const std::string& format) {
  const auto records = stereo::read_dataset_file(input);
  const auto report = stereo::analyze(records);
  if (format == "text") {
    std::cout << stereo::format_report_text(report);
  } else {
    std::cout << stereo::to_json(report).dump(2) << '\n';
  }
  return report.warnings.empty() ? kExitOk : kExitWarnings;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random-dot stereoacuity toolkit"};
  app.require_subcommand(1);

  ProfileArgs profile_args;
  double distance = 0.0;
  double reference = stereo::kReferenceDistanceM;
  int n_levels = stereo::kDefaultLevelCount;
  std::string format = "text";

  auto* levels = app.add_subcommand("levels", "Print the disparity level table");
  profile_args.add_to(levels);
  levels->add_option("--distance", distance, "Viewing distance in meters")->required();
  levels->add_option("--n", n_levels, "Number of levels");
  levels->add_option("--reference", reference, "Reference distance in meters");
  levels->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));

  int level = 1;
  std::string orientation = "up";
  std::uint64_t seed = 1;
  double coverage = stereo::kDefaultDotCoverage;
  std::string out_path;
  auto* render = app.add_subcommand("render", "Render one stimulus to PNG");
  profile_args.add_to(render);
  render->add_option("--distance", distance)->required();
  render->add_option("--level", level, "1-based level index")->required();
  render->add_option("--n", n_levels);
  render->add_option("--orientation", orientation, "up, down, left or right");
  render->add_option("--seed", seed);
  render->add_option("--coverage", coverage, "Fraction of lit pixels per eye");
  render->add_option("--out", out_path)->required();

  std::string input;
  int search_range = stereo::kDefaultSearchRange;
  std::optional<int> block;
  auto* decode = app.add_subcommand("decode", "Recover disparity and gap orientation from a PNG");
  decode->add_option("input", input, "PNG file")->required();
  decode->add_option("--search-range", search_range);
  decode->add_option("--block", block, "Block side in pixels (default 4x dot size)");

  std::string observer;
  int runs = 1;
  auto* simulate = app.add_subcommand("simulate", "Run the staircase against a simulated observer");
  profile_args.add_to(simulate);
  simulate->add_option("--observer", observer,
                       "deterministic:THETA or psychometric:THETA,SLOPE,LAPSE")->required();
  simulate->add_option("--distance", distance)->required();
  simulate->add_option("--n", n_levels);
  simulate->add_option("--seed", seed);
  simulate->add_option("--runs", runs);

  std::string analyze_format = "json";
  auto* analyze = app.add_subcommand("analyze", "Agreement statistics for a measurement CSV");
  analyze->add_option("--input", input, "CSV: subject_id,test,day,value")->required();
  analyze->add_option("--format", analyze_format)->check(CLI::IsMember({"text", "json"}));

  int port = stereo::default_port();
  std::string host = "127.0.0.1";
  std::string log_path;
  auto* serve = app.add_subcommand("serve", "Serve test sessions over HTTP");
  serve->add_option("--port", port);
  serve->add_option("--host", host);
  serve->add_option("--log", log_path, "Append session records as JSON lines");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*levels) return cmd_levels(profile_args, distance, n_levels, reference, format);
    if (*render) {
      return cmd_render(profile_args, distance, level, n_levels, orientation, seed, coverage,
                        out_path);
    }
    if (*decode) return cmd_decode(input, search_range, block);
    if (*simulate) return cmd_simulate(profile_args, observer, distance, n_levels, seed, runs);
    if (*analyze) return cmd_analyze(input, analyze_format);
    if (*serve) {
      stereo::SessionStore store(log_path.empty() ? std::nullopt
                                                  : std::optional<std::filesystem::path>(log_path));
      std::cerr << "serving on http://" << host << ':' << port << '\n';
      stereo::run_service(store, host, port);
      return kExitOk;
    }
  } catch (const stereo::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
