#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "stereotest/geometry.hpp"
#include "stereotest/staircase.hpp"

namespace stereo {

struct SessionParams {
  DisplayProfile profile;
  double distance_m = 0.0;
  double reference_m = kReferenceDistanceM;
  int n_levels = kDefaultLevelCount;
  std::optional<std::uint64_t> seed;
};

struct StimulusFrame {
  std::size_t trial = 0;
  DisparityLevel level;
  std::vector<std::uint8_t> png;
};

struct ResponseOutcome {
  bool correct = false;
  bool finished = false;
  std::optional<Acuity> outcome;
};

std::string new_session_id();
std::string utc_timestamp_now();

/// In-memory sessions keyed by id. Every state change appends the full record
/// as one JSON line to the log file, when one is configured. Mutations of one
/// session are serialized; a response arriving while another is in flight for
/// the same session fails with SessionBusy.
class SessionStore {
 public:
  explicit SessionStore(std::optional<std::filesystem::path> log_path = std::nullopt);

  SessionRecord create(const SessionParams& params);

  /// Throws SessionNotFound.
  SessionRecord get(const std::string& id) const;

  /// PNG of the current trial; repeated calls return identical bytes.
  /// Throws SessionNotFound or SessionFinished.
  StimulusFrame stimulus(const std::string& id);

  /// Throws SessionBusy when another response for the same session is in flight.
  ResponseOutcome respond(const std::string& id, Orientation response,
                          std::optional<std::int64_t> elapsed_ms = std::nullopt);

  std::size_t size() const;

 private:
  struct Entry;

  std::shared_ptr<Entry> find(const std::string& id) const;
  void persist(const SessionRecord& record);

  std::optional<std::filesystem::path> log_path_;
  mutable std::mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  std::mutex log_mutex_;
};

/// Latest record per session id from a JSON-lines log, in first-seen order.
std::vector<SessionRecord> load_session_log(const std::filesystem::path& path);

}  // namespace stereo
