#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "stereotest/dataset.hpp"
#include "stereotest/error.hpp"
#include "stereotest/geometry.hpp"
#include "stereotest/json_io.hpp"
#include "stereotest/png_io.hpp"
#include "stereotest/renderer.hpp"
#include "stereotest/report.hpp"
#include "stereotest/staircase.hpp"

using namespace stereo;

namespace {

const DisplayProfile kRetina{264.0, 2048, 1536};

std::vector<MeasurementRecord> read_text(const std::string& text) {
  std::istringstream in(text);
  return read_dataset(in);
}

}  // namespace

TEST(Dataset, ParsesValuesAndOl) {
  const auto recs = read_text("subject_id,test,day,value\n17,HD,1,7\n17,ST_far,1,OL\n26,TNO,2,480\n");
  ASSERT_EQ(recs.size(), 3u);
  EXPECT_EQ(recs[0].subject_id, "17");
  EXPECT_EQ(recs[0].test, TestKind::HD);
  EXPECT_DOUBLE_EQ(recs[0].value.arcsec(), 7.0);
  EXPECT_TRUE(recs[1].value.is_outside_limits());
  EXPECT_EQ(recs[2].day, 2);
}

TEST(Dataset, ReportsOffendingLine) {
  const std::vector<std::pair<std::string, int>> bad{
      {"wrong,header\n", 1},
      {"subject_id,test,day,value\n1,HD,1,7\n1,XX,1,7\n", 3},
      {"subject_id,test,day,value\n1,HD,3,7\n", 2},
      {"subject_id,test,day,value\n1,HD,1,abc\n", 2},
      {"subject_id,test,day,value\n1,HD,1\n", 2},
      {"subject_id,test,day,value\n1,HD,1,-4\n", 2},
  };
  for (const auto& [text, line] : bad) {
    try {
      read_text(text);
      FAIL() << text;
    } catch (const DatasetError& e) {
      EXPECT_EQ(e.line(), line) << text;
      EXPECT_EQ(e.code(), ErrorCode::MalformedDataset);
    }
  }
}

TEST(Dataset, RoundTrip) {
  std::vector<MeasurementRecord> recs{{"a", TestKind::HD, 1, Acuity::arcsec(18.5)},
                                      {"a", TestKind::ST_near, 2, Acuity::arcsec(397)},
                                      {"b", TestKind::TNO, 1, Acuity::outside_limits()},
                                      {"b", TestKind::ST_far, 2, Acuity::arcsec(0.1 + 0.2)}};
  std::ostringstream out;
  write_dataset(out, recs);
  EXPECT_EQ(read_text(out.str()), recs);
  const auto path = std::filesystem::temp_directory_path() / "stereotest_roundtrip.csv";
  write_dataset_file(path, recs);
  EXPECT_EQ(read_dataset_file(path), recs);
  std::filesystem::remove(path);
}

TEST(Png, RoundTripAndStableBytes) {
  const auto spec = make_stereogram_spec(kRetina, build_level_table(kRetina, 0.5), 3, Orientation::Up, 1);
  const auto img = render(spec);
  const auto bytes = encode_png(img);
  EXPECT_EQ(bytes, encode_png(img));
  EXPECT_TRUE(decode_png(bytes) == img);
  const auto path = std::filesystem::temp_directory_path() / "stereotest_roundtrip.png";
  write_png(path, img);
  EXPECT_TRUE(read_png(path) == img);
  std::filesystem::remove(path);
  const std::vector<std::uint8_t> junk{1, 2, 3, 4};
  EXPECT_THROW(decode_png(junk), Error);
}

TEST(Json, SessionRecordRoundTrip) {
  auto rec = simulate(SimulatedObserver::deterministic(100), build_level_table(kRetina, 0.5), kRetina, 3);
  rec.session_id = "abc";
  rec.created_at = "2026-01-01T00:00:00Z";
  const json j = rec;
  EXPECT_EQ(j.at("outcome_rounded"), 119);
  EXPECT_TRUE(j.at("finished").get<bool>());
  const auto back = j.get<SessionRecord>();
  EXPECT_EQ(back.trials, rec.trials);
  EXPECT_EQ(back.outcome, rec.outcome);
  EXPECT_EQ(back.level_table, rec.level_table);
  EXPECT_EQ(back.profile, rec.profile);
  EXPECT_EQ(back.seed, rec.seed);

  const json redacted = redacted_session_json(rec);
  for (const auto& t : redacted.at("trials")) EXPECT_FALSE(t.contains("presented"));
  EXPECT_TRUE(redacted.at("redacted").get<bool>());
}

TEST(Json, OutcomeEncoding) {
  EXPECT_TRUE(outcome_to_json(std::nullopt).is_null());
  EXPECT_EQ(outcome_to_json(Acuity::outside_limits()), "OL");
  EXPECT_EQ(outcome_from_json(json("OL")), Acuity::outside_limits());
  EXPECT_EQ(outcome_from_json(json(40.5)), Acuity::arcsec(40.5));
}

TEST(Report, TextMentionsEveryTest) {
  std::vector<MeasurementRecord> recs;
  for (int i = 0; i < 4; ++i) {
    const std::string id = std::to_string(i);
    for (auto t : kAllTests) {
      recs.push_back({id, t, 1, Acuity::arcsec(40 + 20 * i)});
      recs.push_back({id, t, 2, Acuity::arcsec(40 + 10 * i)});
    }
  }
  const auto text = format_report_text(analyze(recs));
  for (auto t : kAllTests) EXPECT_NE(text.find(std::string(to_string(t))), std::string::npos);
}
