#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <string>

#include "stereotest/json_io.hpp"
#include "stereotest/png_io.hpp"

using namespace stereo;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run(const std::string& args) {
  const std::string cmd = std::string(STEREOTEST_CLI_PATH) + " " + args + " 2>/dev/null";
  RunResult r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = ::pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

}  // namespace

TEST(Cli, LevelsJson) {
  const auto r = run("levels --preset 264 --distance 3 --format json");
  ASSERT_EQ(r.exit_code, 0);
  const auto j = json::parse(r.out);
  std::vector<long> rounded;
  for (const auto& l : j.at("levels")) rounded.push_back(l.at("arcsec_rounded"));
  EXPECT_EQ(rounded, (std::vector<long>{7, 13, 20, 26, 33, 40, 46, 53, 60, 66}));
}

TEST(Cli, RenderThenDecode) {
  const auto path = std::filesystem::temp_directory_path() / "stereotest_cli.png";
  auto r = run("render --ppi 264 --distance 0.5 --level 4 --orientation left --seed 5 --out " + path.string());
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_GT(read_png(path).width_px, 1000);
  r = run("decode " + path.string());
  ASSERT_EQ(r.exit_code, 0);
  const auto j = json::parse(r.out);
  EXPECT_EQ(j.at("pixel_shift"), 4);
  EXPECT_EQ(j.at("orientation"), "left");
  std::filesystem::remove(path);
}

TEST(Cli, Simulate) {
  const auto r = run("simulate --observer deterministic:100 --ppi 264 --distance 0.5 --seed 3");
  ASSERT_EQ(r.exit_code, 0);
  const auto j = json::parse(r.out);
  EXPECT_EQ(j.at("sessions").at(0).at("outcome_rounded"), 119);
}

TEST(Cli, AnalyzeFixture) {
  const auto r = run(std::string("analyze --input ") + STEREOTEST_FIXTURE + " --format json");
  ASSERT_EQ(r.exit_code, 0);
  const auto j = json::parse(r.out);
  EXPECT_EQ(j.at("n_records"), 96);
  const auto text = run(std::string("analyze --input ") + STEREOTEST_FIXTURE + " --format text");
  EXPECT_EQ(text.exit_code, 0);
  EXPECT_NE(text.out.find("ST_near vs TNO"), std::string::npos);
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run("").exit_code, 2);
  EXPECT_EQ(run("levels").exit_code, 2);
  EXPECT_EQ(run("levels --ppi 264 --distance -1").exit_code, 2);
  EXPECT_EQ(run("analyze --input /nonexistent.csv").exit_code, 2);
  EXPECT_EQ(run("bogus").exit_code, 2);
}
