#include <gtest/gtest.h>
#include <httplib.h>

#include <filesystem>
#include <thread>

#include "stereotest/error.hpp"
#include "stereotest/json_io.hpp"
#include "stereotest/png_io.hpp"
#include "stereotest/service.hpp"
#include "stereotest/session_store.hpp"

using namespace stereo;

namespace {

const DisplayProfile kRetina{264.0, 2048, 1536};

Orientation other(Orientation o) { return o == Orientation::Left ? Orientation::Right : Orientation::Left; }

class ServiceFixture : public ::testing::Test {
 protected:
  void SetUp() override {
    install_routes(server_, store_);
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  void TearDown() override {
    server_.stop();
    thread_.join();
  }

  httplib::Client client() { return httplib::Client("127.0.0.1", port_); }

  SessionStore store_;
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

}  // namespace

TEST(SessionStore, LifecycleAndErrors) {
  SessionStore store;
  const auto rec = store.create({kRetina, 0.5, 0.5, 10, 42});
  EXPECT_EQ(rec.session_id.size(), 36u);
  EXPECT_EQ(rec.session_id[14], '4');
  EXPECT_EQ(store.size(), 1u);

  const auto a = store.stimulus(rec.session_id);
  const auto b = store.stimulus(rec.session_id);
  EXPECT_EQ(a.png, b.png);
  EXPECT_EQ(a.level.index, 10);

  const auto shown = trial_orientation(42, 0);
  auto out = store.respond(rec.session_id, shown, 1200);
  EXPECT_TRUE(out.correct);
  EXPECT_FALSE(out.finished);
  EXPECT_EQ(store.get(rec.session_id).trials.at(0).elapsed_ms, 1200);

  // Miss twice at level 9: PostFail, then one level up; correct there ends it.
  store.respond(rec.session_id, other(trial_orientation(42, 1)), 10);
  store.respond(rec.session_id, other(trial_orientation(42, 2)), 10);
  out = store.respond(rec.session_id, trial_orientation(42, 3), 10);
  EXPECT_TRUE(out.finished);
  ASSERT_TRUE(out.outcome.has_value());
  EXPECT_EQ(round_half_up(out.outcome->arcsec()), 397);
  EXPECT_THROW(store.stimulus(rec.session_id), Error);
  EXPECT_THROW(store.respond(rec.session_id, Orientation::Up), Error);
  EXPECT_THROW(store.get("00000000-0000-4000-8000-000000000000"), Error);
  EXPECT_THROW(store.create({{264.0, 100, 100}, 0.5, 0.5, 10, 1}), Error);
}

TEST(SessionStore, PersistedLogReplays) {
  const auto path = std::filesystem::temp_directory_path() / "stereotest_sessions.jsonl";
  std::filesystem::remove(path);
  std::string id;
  {
    SessionStore store(path);
    id = store.create({kRetina, 3.0, 0.5, 10, 7}).session_id;
    for (std::size_t t = 0; !store.get(id).outcome; ++t) store.respond(id, trial_orientation(7, t), 5);
  }
  const auto records = load_session_log(path);
  ASSERT_EQ(records.size(), 1u);
  EXPECT_EQ(records[0].session_id, id);
  ASSERT_TRUE(records[0].outcome.has_value());
  EXPECT_EQ(replay(records[0]), records[0].outcome);
  std::filesystem::remove(path);
}

TEST(SessionStore, RandomSeedsFitInADouble) {
  SessionStore store;
  for (int i = 0; i < 50; ++i) {
    const auto rec = store.create({kRetina, 0.5, 0.5, 10, std::nullopt});
    EXPECT_LT(rec.seed, std::uint64_t{1} << 53);
  }
}

TEST(Service, DefaultPortFromEnvironment) {
  ::setenv(kPortEnvVar, "9123", 1);
  EXPECT_EQ(default_port(), 9123);
  ::setenv(kPortEnvVar, "junk", 1);
  EXPECT_EQ(default_port(), kDefaultPort);
  ::unsetenv(kPortEnvVar);
  EXPECT_EQ(default_port(), kDefaultPort);
}

TEST_F(ServiceFixture, HttpSessionFlow) {
  auto cli = client();
  auto res = cli.Post("/sessions", R"({"ppi": 264, "distance_m": 0.5, "seed": 3})", "application/json");
  ASSERT_TRUE(res);
  ASSERT_EQ(res->status, 201);
  const auto created = json::parse(res->body);
  const std::string id = created.at("session_id");
  EXPECT_EQ(created.at("level_table").at("levels").size(), 10u);

  res = cli.Get("/sessions/" + id + "/stimulus");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(res->get_header_value("Content-Type"), "image/png");
  EXPECT_EQ(res->get_header_value("X-Level-Index"), "10");
  const std::vector<std::uint8_t> png(res->body.begin(), res->body.end());
  EXPECT_GT(decode_png(png).width_px, 1000);

  res = cli.Post("/sessions/" + id + "/response", R"({"orientation": "sideways"})", "application/json");
  EXPECT_EQ(res->status, 400);
  res = cli.Post("/sessions/" + id + "/response", "not json", "application/json");
  EXPECT_EQ(res->status, 400);

  const std::string shown(to_string(trial_orientation(3, 0)));
  res = cli.Post("/sessions/" + id + "/response", json{{"orientation", shown}, {"elapsed_ms", 900}}.dump(),
                 "application/json");
  ASSERT_EQ(res->status, 200);
  EXPECT_TRUE(json::parse(res->body).at("correct").get<bool>());

  res = cli.Get("/sessions/" + id);
  ASSERT_EQ(res->status, 200);
  const auto running = json::parse(res->body);
  EXPECT_TRUE(running.at("redacted").get<bool>());
  for (const auto& t : running.at("trials")) EXPECT_FALSE(t.contains("presented"));
  EXPECT_EQ(res->body.find("presented"), std::string::npos);

  // Answer wrong until the session ends.
  json last;
  for (std::size_t t = 1; t < 30; ++t) {
    const std::string wrong(to_string(other(trial_orientation(3, t))));
    res = cli.Post("/sessions/" + id + "/response", json{{"orientation", wrong}}.dump(), "application/json");
    ASSERT_EQ(res->status, 200);
    last = json::parse(res->body);
    if (last.at("finished").get<bool>()) break;
  }
  EXPECT_EQ(last.at("outcome"), "OL");
  res = cli.Post("/sessions/" + id + "/response", R"({"orientation": "up"})", "application/json");
  EXPECT_EQ(res->status, 409);
  res = cli.Get("/sessions/" + id + "/stimulus");
  EXPECT_EQ(res->status, 409);
  res = cli.Get("/sessions/" + id);
  const auto done = json::parse(res->body);
  EXPECT_FALSE(done.contains("redacted"));
  EXPECT_TRUE(done.at("trials").at(0).contains("presented"));

  res = cli.Get("/sessions/00000000-0000-4000-8000-000000000000");
  EXPECT_EQ(res->status, 404);
  res = cli.Post("/sessions/00000000-0000-4000-8000-000000000000/response", R"({"orientation": "up"})",
                 "application/json");
  EXPECT_EQ(res->status, 404);
  res = cli.Post("/sessions", R"({"ppi": -1, "distance_m": 0.5})", "application/json");
  EXPECT_EQ(res->status, 400);
  res = cli.Post("/sessions", R"({"distance_m": 0.5})", "application/json");
  EXPECT_EQ(res->status, 400);
}
