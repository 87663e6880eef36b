#pragma once

#include <string>

#include "stereotest/session_store.hpp"

namespace httplib {
class Server;
}

namespace stereo {

inline constexpr int kDefaultPort = 8787;
inline constexpr const char* kPortEnvVar = "STEREO_PORT";

/// Port from STEREO_PORT, falling back to 8787.
int default_port();

/// Routes:
///   POST /sessions                 {ppi, distance_m, seed?, width_px?, height_px?,
///                                   reference_m?, n_levels?} -> {session_id, level_table}
///   GET  /sessions/{id}/stimulus   PNG of the current trial (orientation withheld)
///   POST /sessions/{id}/response   {orientation, elapsed_ms?} -> {correct, finished, outcome?}
///   GET  /sessions/{id}            SessionRecord; presented orientations are
///                                  omitted until the session has finished
/// Errors: 400 malformed body, 404 unknown session, 409 finished or busy session.
void install_routes(httplib::Server& server, SessionStore& store);

/// Blocks serving on host:port until the server is stopped.
void run_service(SessionStore& store, const std::string& host, int port);

}  // namespace stereo
