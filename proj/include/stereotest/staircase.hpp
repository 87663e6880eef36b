#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stereotest/geometry.hpp"
#include "stereotest/types.hpp"

namespace stereo {

enum class StaircasePhase { Descending, PostFail };

std::string_view to_string(StaircasePhase phase) noexcept;

struct TrialRecord {
  int level_index = 0;
  int pixel_shift = 0;
  double arcsec = 0.0;
  Orientation presented = Orientation::Up;
  std::optional<Orientation> response;  // absent for simulated forced outcomes
  bool correct = false;
  std::int64_t elapsed_ms = 0;

  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

/// Gap orientation shown on trial `trial_number` (0-based) of a session seeded
/// with `seed`. Uniform over the four alternatives, independent per trial.
Orientation trial_orientation(std::uint64_t seed, std::size_t trial_number);

/// Dot-field seed for the stimulus of a given trial.
std::uint64_t trial_render_seed(std::uint64_t seed, std::size_t trial_number);

/// Descends one level per correct answer. After the first miss the level is
/// shown again; each further miss moves one level up, and the first correct
/// answer after a miss ends the session there. A correct answer at the finest
/// level also ends it, while two misses in a row at the coarsest give OL.
class StaircaseState {
 public:
  const LevelTable& table() const noexcept { return table_; }
  std::uint64_t seed() const noexcept { return seed_; }
  int current_index() const noexcept { return current_index_; }
  StaircasePhase phase() const noexcept { return phase_; }
  const std::vector<TrialRecord>& trials() const noexcept { return trials_; }
  const std::optional<Acuity>& outcome() const noexcept { return outcome_; }
  bool finished() const noexcept { return outcome_.has_value(); }

  const DisparityLevel& current_level() const { return table_.level(current_index_); }
  Orientation current_orientation() const { return trial_orientation(seed_, trials_.size()); }

  friend StaircaseState new_session(LevelTable table, std::uint64_t seed);
  friend StaircaseState record_outcome(StaircaseState state, bool correct,
                                       std::optional<Orientation> response,
                                       std::int64_t elapsed_ms);

 private:
  StaircaseState() = default;

  LevelTable table_;
  std::uint64_t seed_ = 0;
  int current_index_ = 0;
  StaircasePhase phase_ = StaircasePhase::Descending;
  std::vector<TrialRecord> trials_;
  std::optional<Acuity> outcome_;
};

/// Starts at the coarsest level. Throws EmptyTable.
StaircaseState new_session(LevelTable table, std::uint64_t seed);

/// Scores `response` against the presented orientation and advances.
/// Throws SessionFinished once an outcome exists.
StaircaseState step(StaircaseState state, Orientation response, std::int64_t elapsed_ms = 0);

/// Advances with a forced correct/incorrect outcome (no response orientation).
StaircaseState step_forced(StaircaseState state, bool correct, std::int64_t elapsed_ms = 0);

StaircaseState record_outcome(StaircaseState state, bool correct,
                              std::optional<Orientation> response, std::int64_t elapsed_ms);

/// Upper bound on trials for a table of n levels.
constexpr int max_trials(int n_levels) { return 2 * n_levels + 2; }

struct SimulatedObserver {
  enum class Kind { Deterministic, Psychometric };

  Kind kind = Kind::Deterministic;
  double threshold_arcsec = 0.0;
  double slope = 1.0;
  double lapse_rate = 0.0;
  std::uint64_t seed = 0;

  static SimulatedObserver deterministic(double threshold_arcsec);
  static SimulatedObserver psychometric(double threshold_arcsec, double slope, double lapse_rate,
                                        std::uint64_t seed);

  /// Probability of a correct 4AFC answer at `arcsec`.
  double p_correct(double arcsec) const;
};

/// Parses "deterministic:THETA" or "psychometric:THETA,SLOPE,LAPSE".
SimulatedObserver parse_observer(const std::string& text, std::uint64_t seed = 0);

inline constexpr std::int64_t kSimulatedTrialMs = 2500;

struct SessionRecord {
  std::string session_id;
  std::string created_at;  // UTC, ISO 8601
  DisplayProfile profile;
  double distance_m = 0.0;
  double reference_m = kReferenceDistanceM;
  std::uint64_t seed = 0;
  std::vector<TrialRecord> trials;
  std::optional<Acuity> outcome;
  LevelTable level_table;
};

/// Record fields taken from a state; id and timestamp are left to the caller.
SessionRecord to_session_record(const StaircaseState& state, const DisplayProfile& profile);

/// Runs a full session against a simulated observer (2.5 s per trial).
SessionRecord simulate(const SimulatedObserver& observer, const LevelTable& table,
                       const DisplayProfile& profile, std::uint64_t seed);

/// Re-drives the transition function with the recorded correctness sequence.
/// Throws ReplayMismatch if the log is inconsistent with the rules.
std::optional<Acuity> replay(const SessionRecord& record);

}  // namespace stereo
