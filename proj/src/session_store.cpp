#include "stereotest/session_store.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <random>

#include "stereotest/error.hpp"
#include "stereotest/json_io.hpp"
#include "stereotest/png_io.hpp"
#include "stereotest/renderer.hpp"

namespace stereo {

namespace {

std::mt19937_64& id_engine() {
  thread_local std::mt19937_64 engine{[] {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  }()};
  return engine;
}

// Seeds stay below 2^53 so they survive a round trip through JavaScript numbers.
constexpr std::uint64_t kSeedMask = (std::uint64_t{1} << 53) - 1;

}  // namespace

std::string new_session_id() {
  std::uint64_t hi = id_engine()();
  std::uint64_t lo = id_engine()();
  hi = (hi & 0xffffffffffff0fffULL) | 0x0000000000004000ULL;  // version 4
  lo = (lo & 0x3fffffffffffffffULL) | 0x8000000000000000ULL;  // RFC 4122 variant
  char buf[37];
  std::snprintf(buf, sizeof buf, "%08x-%04x-%04x-%04x-%012llx",
                static_cast<unsigned>(hi >> 32), static_cast<unsigned>((hi >> 16) & 0xffff),
                static_cast<unsigned>(hi & 0xffff), static_cast<unsigned>(lo >> 48),
                static_cast<unsigned long long>(lo & 0xffffffffffffULL));
  return buf;
}

std::string utc_timestamp_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct SessionStore::Entry {
  Entry(SessionRecord r, StaircaseState s) : meta(std::move(r)), state(std::move(s)) {}

  std::mutex mutex;
  SessionRecord meta;  // id, timestamp, profile
  StaircaseState state;
  std::optional<StimulusFrame> cached;
  std::chrono::steady_clock::time_point presented_at = std::chrono::steady_clock::now();

  SessionRecord snapshot() const {
    SessionRecord r = to_session_record(state, meta.profile);
    r.session_id = meta.session_id;
    r.created_at = meta.created_at;
    return r;
  }
};

SessionStore::SessionStore(std::optional<std::filesystem::path> log_path)
    : log_path_(std::move(log_path)) {}

SessionRecord SessionStore::create(const SessionParams& params) {
  validate(params.profile);
  stimulus_size_px(params.profile);
  LevelTable table =
      build_level_table(params.profile, params.distance_m, params.n_levels, params.reference_m);
  const std::uint64_t seed = params.seed ? *params.seed : (id_engine()() & kSeedMask);

  SessionRecord meta;
  meta.session_id = new_session_id();
  meta.created_at = utc_timestamp_now();
  meta.profile = params.profile;
  auto entry = std::make_shared<Entry>(meta, new_session(std::move(table), seed));
  const SessionRecord record = entry->snapshot();
  {
    std::lock_guard lock(sessions_mutex_);
    sessions_.emplace(record.session_id, entry);
  }
  persist(record);
  return record;
}

std::shared_ptr<SessionStore::Entry> SessionStore::find(const std::string& id) const {
  std::lock_guard lock(sessions_mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw Error(ErrorCode::SessionNotFound, "no session " + id);
  return it->second;
}

SessionRecord SessionStore::get(const std::string& id) const {
  auto entry = find(id);
  std::lock_guard lock(entry->mutex);
  return entry->snapshot();
}

StimulusFrame SessionStore::stimulus(const std::string& id) {
  auto entry = find(id);
  std::lock_guard lock(entry->mutex);
  const StaircaseState& state = entry->state;
  if (state.finished()) throw Error(ErrorCode::SessionFinished, "session " + id + " is finished");
  const std::size_t trial = state.trials().size();
  if (!entry->cached || entry->cached->trial != trial) {
    StereogramSpec spec;
    spec.profile = entry->meta.profile;
    spec.distance_m = state.table().distance_m;
    spec.level = state.current_level();
    spec.orientation = state.current_orientation();
    spec.seed = trial_render_seed(state.seed(), trial);
    entry->cached = StimulusFrame{trial, spec.level, encode_png(render(spec))};
    entry->presented_at = std::chrono::steady_clock::now();
  }
  return *entry->cached;
}

ResponseOutcome SessionStore::respond(const std::string& id, Orientation response,
                                      std::optional<std::int64_t> elapsed_ms) {
  auto entry = find(id);
  std::unique_lock lock(entry->mutex, std::try_to_lock);
  if (!lock.owns_lock()) {
    throw Error(ErrorCode::SessionBusy, "another response for " + id + " is in flight");
  }
  if (entry->state.finished()) {
    throw Error(ErrorCode::SessionFinished, "session " + id + " is finished");
  }
  const std::int64_t elapsed =
      elapsed_ms ? *elapsed_ms
                 : std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - entry->presented_at)
                       .count();
  entry->state = step(std::move(entry->state), response, elapsed);
  entry->presented_at = std::chrono::steady_clock::now();

  ResponseOutcome out;
  out.correct = entry->state.trials().back().correct;
  out.finished = entry->state.finished();
  out.outcome = entry->state.outcome();
  const SessionRecord record = entry->snapshot();
  lock.unlock();
  persist(record);
  return out;
}

std::size_t SessionStore::size() const {
  std::lock_guard lock(sessions_mutex_);
  return sessions_.size();
}

void SessionStore::persist(const SessionRecord& record) {
  if (!log_path_) return;
  const std::string line = json(record).dump();
  std::lock_guard lock(log_mutex_);
  std::ofstream out(*log_path_, std::ios::app);
  if (!out) throw Error(ErrorCode::InvalidInput, "cannot append to " + log_path_->string());
  out << line << '\n';
}

std::vector<SessionRecord> load_session_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot open " + path.string());
  std::vector<SessionRecord> records;
  std::map<std::string, std::size_t> position;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    SessionRecord r;
    try {
      r = json::parse(line).get<SessionRecord>();
    } catch (const json::exception& e) {
      throw Error(ErrorCode::InvalidInput,
                  path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
    auto [it, inserted] = position.emplace(r.session_id, records.size());
    if (inserted) {
      records.push_back(std::move(r));
    } else {
      records[it->second] = std::move(r);
    }
  }
  return records;
}

}  // namespace stereo
