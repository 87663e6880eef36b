#include "stereotest/service.hpp"

#include <httplib.h>

#include <cstdlib>

#include "stereotest/error.hpp"
#include "stereotest/json_io.hpp"

namespace stereo {

namespace {

constexpr const char* kJson = "application/json";
constexpr int kDefaultWidthPx = 2048;
constexpr int kDefaultHeightPx = 1536;

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), kJson);
}

void send_error(httplib::Response& res, int status, const std::string& code,
                const std::string& message) {
  send_json(res, status, {{"error", code}, {"message", message}});
}

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::SessionNotFound: return 404;
    case ErrorCode::SessionFinished:
    case ErrorCode::SessionBusy: return 409;
    default: return 400;
  }
}

// Runs a handler, translating library and JSON errors into HTTP statuses.
template <typename Fn>
void guarded(httplib::Response& res, Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    send_error(res, status_for(e.code()), std::string(to_string(e.code())), e.what());
  } catch (const json::exception& e) {
    send_error(res, 400, "MalformedBody", e.what());
  }
}

SessionParams parse_create(const std::string& body) {
  const json j = json::parse(body);
  if (!j.is_object()) throw Error(ErrorCode::InvalidInput, "body must be a JSON object");
  SessionParams p;
  p.profile.ppi = j.at("ppi").get<double>();
  p.profile.width_px = j.value("width_px", kDefaultWidthPx);
  p.profile.height_px = j.value("height_px", kDefaultHeightPx);
  p.distance_m = j.at("distance_m").get<double>();
  p.reference_m = j.value("reference_m", kReferenceDistanceM);
  p.n_levels = j.value("n_levels", kDefaultLevelCount);
  if (j.contains("seed") && !j["seed"].is_null()) p.seed = j["seed"].get<std::uint64_t>();
  return p;
}

}  // namespace

int default_port() {
  if (const char* env = std::getenv(kPortEnvVar)) {
    try {
      const int port = std::stoi(env);
      if (port > 0 && port < 65536) return port;
    } catch (const std::exception&) {
    }
  }
  return kDefaultPort;
}

void install_routes(httplib::Server& server, SessionStore& store) {
  server.Post("/sessions", [&store](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const SessionRecord record = store.create(parse_create(req.body));
      send_json(res, 201, {{"session_id", record.session_id}, {"level_table", record.level_table}});
    });
  });

  server.Get(R"(/sessions/([0-9a-fA-F-]+)/stimulus)",
             [&store](const httplib::Request& req, httplib::Response& res) {
               guarded(res, [&] {
                 const StimulusFrame frame = store.stimulus(req.matches[1]);
                 res.status = 200;
                 res.set_header("Cache-Control", "no-store");
                 res.set_header("X-Trial", std::to_string(frame.trial));
                 res.set_header("X-Level-Index", std::to_string(frame.level.index));
                 res.set_header("X-Pixel-Shift", std::to_string(frame.level.pixel_shift));
                 res.set_header("X-Arcsec", json(frame.level.arcsec).dump());
                 res.set_content(std::string(frame.png.begin(), frame.png.end()), "image/png");
               });
             });

  server.Post(R"(/sessions/([0-9a-fA-F-]+)/response)",
              [&store](const httplib::Request& req, httplib::Response& res) {
                guarded(res, [&] {
                  const std::string id = req.matches[1];
                  store.get(id);  // 404 before 400 for unknown sessions
                  const json j = json::parse(req.body);
                  const auto orientation = parse_orientation(j.at("orientation").get<std::string>());
                  if (!orientation) {
                    throw Error(ErrorCode::InvalidInput, "orientation must be up/down/left/right");
                  }
                  std::optional<std::int64_t> elapsed;
                  if (j.contains("elapsed_ms") && !j["elapsed_ms"].is_null()) {
                    elapsed = j["elapsed_ms"].get<std::int64_t>();
                  }
                  const ResponseOutcome out = store.respond(id, *orientation, elapsed);
                  json body{{"correct", out.correct}, {"finished", out.finished}};
                  if (out.finished) {
                    body["outcome"] = outcome_to_json(out.outcome);
                    if (out.outcome->is_numeric()) {
                      body["outcome_rounded"] = round_half_up(out.outcome->arcsec());
                    }
                  }
                  send_json(res, 200, body);
                });
              });

  server.Get(R"(/sessions/([0-9a-fA-F-]+))",
             [&store](const httplib::Request& req, httplib::Response& res) {
               guarded(res, [&] {
                 const SessionRecord record = store.get(req.matches[1]);
                 send_json(res, 200, record.outcome ? json(record) : redacted_session_json(record));
               });
             });
}

void run_service(SessionStore& store, const std::string& host, int port) {
  httplib::Server server;
  install_routes(server, store);
  if (!server.listen(host, port)) {
    throw Error(ErrorCode::InvalidInput, "cannot listen on " + host + ":" + std::to_string(port));
  }
}

}  // namespace stereo
