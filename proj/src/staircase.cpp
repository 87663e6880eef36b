#include "stereotest/staircase.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "stereotest/error.hpp"

namespace stereo {

namespace {

std::uint64_t mix(std::uint64_t seed, std::uint64_t salt) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(salt), static_cast<std::uint32_t>(salt >> 32)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

constexpr std::uint64_t kOrientationSalt = 0x6f7269656e74ULL;
constexpr std::uint64_t kRenderSalt = 0x72656e646572ULL;

}  // namespace

std::string_view to_string(StaircasePhase phase) noexcept {
  return phase == StaircasePhase::Descending ? "descending" : "post_fail";
}

Orientation trial_orientation(std::uint64_t seed, std::size_t trial_number) {
  const std::uint64_t bits = mix(seed ^ kOrientationSalt, trial_number);
  return kAllOrientations[bits >> 62];
}

std::uint64_t trial_render_seed(std::uint64_t seed, std::size_t trial_number) {
  return mix(seed ^ kRenderSalt, trial_number);
}

StaircaseState new_session(LevelTable table, std::uint64_t seed) {
  if (table.empty()) throw Error(ErrorCode::EmptyTable, "level table has no levels");
  StaircaseState state;
  state.current_index_ = table.size();
  state.table_ = std::move(table);
  state.seed_ = seed;
  return state;
}

StaircaseState record_outcome(StaircaseState state, bool correct,
                              std::optional<Orientation> response, std::int64_t elapsed_ms) {
  if (state.finished()) throw Error(ErrorCode::SessionFinished, "session already has an outcome");
  if (elapsed_ms < 0) throw Error(ErrorCode::InvalidInput, "elapsed time must be >= 0");

  const DisparityLevel& level = state.current_level();
  state.trials_.push_back({level.index, level.pixel_shift, level.arcsec,
                           state.current_orientation(), response, correct, elapsed_ms});

  const int n = state.table_.size();
  if (state.phase_ == StaircasePhase::Descending) {
    if (!correct) {
      state.phase_ = StaircasePhase::PostFail;
    } else if (state.current_index_ == 1) {
      state.outcome_ = Acuity::arcsec(level.arcsec);
    } else {
      --state.current_index_;
    }
  } else if (correct) {
    state.outcome_ = Acuity::arcsec(level.arcsec);
  } else if (state.current_index_ == n) {
    state.outcome_ = Acuity::outside_limits();
  } else {
    ++state.current_index_;
  }
  return state;
}

StaircaseState step(StaircaseState state, Orientation response, std::int64_t elapsed_ms) {
  const bool correct = !state.finished() && response == state.current_orientation();
  return record_outcome(std::move(state), correct, response, elapsed_ms);
}

StaircaseState step_forced(StaircaseState state, bool correct, std::int64_t elapsed_ms) {
  return record_outcome(std::move(state), correct, std::nullopt, elapsed_ms);
}

SimulatedObserver SimulatedObserver::deterministic(double threshold_arcsec) {
  if (!(threshold_arcsec >= 0.0)) throw Error(ErrorCode::InvalidInput, "threshold must be >= 0");
  SimulatedObserver o;
  o.threshold_arcsec = threshold_arcsec;
  return o;
}

SimulatedObserver SimulatedObserver::psychometric(double threshold_arcsec, double slope,
                                                  double lapse_rate, std::uint64_t seed) {
  if (!(threshold_arcsec >= 0.0) || !(slope > 0.0) || !(lapse_rate >= 0.0 && lapse_rate <= 0.75)) {
    throw Error(ErrorCode::InvalidInput,
                "psychometric observer needs threshold >= 0, slope > 0, lapse in [0, 0.75]");
  }
  SimulatedObserver o;
  o.kind = Kind::Psychometric;
  o.threshold_arcsec = threshold_arcsec;
  o.slope = slope;
  o.lapse_rate = lapse_rate;
  o.seed = seed;
  return o;
}

double SimulatedObserver::p_correct(double arcsec) const {
  if (kind == Kind::Deterministic) return arcsec >= threshold_arcsec ? 1.0 : 0.0;
  const double logistic = 1.0 / (1.0 + std::exp(-(arcsec - threshold_arcsec) / slope));
  return 0.25 + (0.75 - lapse_rate) * logistic;
}

SimulatedObserver parse_observer(const std::string& text, std::uint64_t seed) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw Error(ErrorCode::InvalidInput, "observer must be deterministic:T or psychometric:T,S,L");
  }
  const std::string kind = text.substr(0, colon);
  std::vector<double> params;
  std::stringstream rest(text.substr(colon + 1));
  std::string item;
  while (std::getline(rest, item, ',')) {
    try {
      std::size_t used = 0;
      params.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidInput, "bad observer parameter '" + item + "'");
    }
  }
  if (kind == "deterministic" && params.size() == 1) {
    return SimulatedObserver::deterministic(params[0]);
  }
  if (kind == "psychometric" && params.size() == 3) {
    return SimulatedObserver::psychometric(params[0], params[1], params[2], seed);
  }
  throw Error(ErrorCode::InvalidInput, "observer must be deterministic:T or psychometric:T,S,L");
}

SessionRecord to_session_record(const StaircaseState& state, const DisplayProfile& profile) {
  SessionRecord record;
  record.profile = profile;
  record.distance_m = state.table().distance_m;
  record.reference_m = state.table().reference_distance_m;
  record.seed = state.seed();
  record.trials = state.trials();
  record.outcome = state.outcome();
  record.level_table = state.table();
  return record;
}

SessionRecord simulate(const SimulatedObserver& observer, const LevelTable& table,
                       const DisplayProfile& profile, std::uint64_t seed) {
  StaircaseState state = new_session(table, seed);
  std::mt19937_64 rng(observer.seed);
  while (!state.finished()) {
    const double p = observer.p_correct(state.current_level().arcsec);
    bool correct = p >= 1.0;
    if (observer.kind == SimulatedObserver::Kind::Psychometric) {
      correct = static_cast<double>(rng() >> 11) * 0x1.0p-53 < p;
    }
    state = step_forced(std::move(state), correct, kSimulatedTrialMs);
  }
  return to_session_record(state, profile);
}

std::optional<Acuity> replay(const SessionRecord& record) {
  StaircaseState state = new_session(record.level_table, record.seed);
  for (std::size_t i = 0; i < record.trials.size(); ++i) {
    const TrialRecord& trial = record.trials[i];
    if (state.finished()) {
      throw Error(ErrorCode::ReplayMismatch, "trial " + std::to_string(i) + " after termination");
    }
    if (trial.level_index != state.current_index() ||
        trial.presented != state.current_orientation()) {
      throw Error(ErrorCode::ReplayMismatch,
                  "trial " + std::to_string(i) + " disagrees with the transition rules");
    }
    if (trial.response && (*trial.response == trial.presented) != trial.correct) {
      throw Error(ErrorCode::ReplayMismatch, "trial " + std::to_string(i) + " mis-scored");
    }
    state = record_outcome(std::move(state), trial.correct, trial.response, trial.elapsed_ms);
  }
  if (state.outcome() != record.outcome) {
    throw Error(ErrorCode::ReplayMismatch, "replayed outcome differs from the recorded one");
  }
  return state.outcome();
}

}  // namespace stereo
