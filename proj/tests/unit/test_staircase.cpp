#include <gtest/gtest.h>

#include <array>
#include <functional>

#include "oracles.hpp"
#include "stereotest/error.hpp"
#include "stereotest/geometry.hpp"
#include "stereotest/staircase.hpp"

using namespace stereo;

namespace {

const DisplayProfile kRetina{264.0, 2048, 1536};
const DisplayProfile kMini{326.0, 2048, 1536};

LevelTable near_table() { return build_level_table(kRetina, 0.5); }
LevelTable far_table() { return build_level_table(kRetina, 3.0); }

Orientation wrong(Orientation o) {
  return o == Orientation::Up ? Orientation::Down : Orientation::Up;
}

StaircaseState answer(StaircaseState s, bool correct) {
  const auto shown = s.current_orientation();
  return step(std::move(s), correct ? shown : wrong(shown), 100);
}

std::vector<double> arcsecs(const LevelTable& t) {
  std::vector<double> out;
  for (const auto& l : t.levels) out.push_back(l.arcsec);
  return out;
}

}  // namespace

TEST(Staircase, StartsAtCoarsestLevel) {
  const auto n = new_session(near_table(), 1);
  EXPECT_EQ(n.current_index(), 10);
  EXPECT_EQ(n.current_level().arcsec_rounded, 397);
  EXPECT_EQ(new_session(far_table(), 1).current_level().arcsec_rounded, 66);
  EXPECT_TRUE(n.trials().empty());
  EXPECT_FALSE(n.outcome().has_value());
  EXPECT_EQ(n.phase(), StaircasePhase::Descending);
  EXPECT_THROW(new_session(LevelTable{}, 1), Error);
}

TEST(Staircase, TransitionExamples) {
  auto s = new_session(near_table(), 5);
  for (int i = 0; i < 3; ++i) s = answer(std::move(s), true);
  ASSERT_EQ(s.current_index(), 7);
  s = answer(std::move(s), true);
  EXPECT_EQ(s.current_index(), 6);

  s = new_session(near_table(), 5);
  for (int i = 0; i < 7; ++i) s = answer(std::move(s), true);
  ASSERT_EQ(s.current_index(), 3);
  auto miss = answer(s, false);
  EXPECT_EQ(miss.current_index(), 3);
  EXPECT_EQ(miss.phase(), StaircasePhase::PostFail);
  auto up = answer(miss, false);
  EXPECT_EQ(up.current_index(), 4);
  auto done = answer(miss, true);
  ASSERT_TRUE(done.finished());
  EXPECT_DOUBLE_EQ(done.outcome()->arcsec(), near_table().level(3).arcsec);
  EXPECT_THROW(answer(done, true), Error);
}

TEST(Staircase, CorrectnessFollowsResponses) {
  auto s = new_session(far_table(), 77);
  const auto shown = s.current_orientation();
  s = step(std::move(s), shown, 1500);
  ASSERT_EQ(s.trials().size(), 1u);
  EXPECT_TRUE(s.trials()[0].correct);
  EXPECT_EQ(s.trials()[0].presented, shown);
  EXPECT_EQ(s.trials()[0].response, shown);
  EXPECT_EQ(s.trials()[0].elapsed_ms, 1500);
  EXPECT_EQ(s.trials()[0].pixel_shift, 10);
}

TEST(Staircase, HandTracedNearExamples) {
  auto out = simulate(SimulatedObserver::deterministic(100), near_table(), kRetina, 3).outcome;
  ASSERT_TRUE(out && out->is_numeric());
  EXPECT_EQ(round_half_up(out->arcsec()), 119);
  out = simulate(SimulatedObserver::deterministic(30), near_table(), kRetina, 3).outcome;
  EXPECT_EQ(round_half_up(out->arcsec()), 40);
  out = simulate(SimulatedObserver::deterministic(1000), near_table(), kRetina, 3).outcome;
  EXPECT_TRUE(out->is_outside_limits());
}

TEST(Staircase, DeterministicRecoveryOverThetaGrid) {
  for (const auto& table : {near_table(), far_table(), build_level_table(kMini, 0.5),
                            build_level_table(kMini, 3.0)}) {
    std::vector<double> thetas{0.0};
    for (const auto& l : table.levels) {
      for (double eps : {-1e-6, 0.0, 1e-6, -0.5, 0.5}) thetas.push_back(l.arcsec + eps);
    }
    thetas.push_back(table.coarsest().arcsec * 10);
    for (double theta : thetas) {
      for (std::uint64_t seed : {1u, 2u}) {
        const auto rec = simulate(SimulatedObserver::deterministic(theta), table, kRetina, seed);
        const auto expected = oracle::expected_staircase(arcsecs(table), theta);
        ASSERT_TRUE(rec.outcome.has_value());
        if (expected) {
          ASSERT_TRUE(rec.outcome->is_numeric()) << theta;
          EXPECT_DOUBLE_EQ(rec.outcome->arcsec(), *expected) << theta;
        } else {
          EXPECT_TRUE(rec.outcome->is_outside_limits()) << theta;
        }
        EXPECT_LE(static_cast<int>(rec.trials.size()), max_trials(table.size()));
        if (theta <= table.finest().arcsec) EXPECT_LE(rec.trials.size(), 13u);
      }
    }
  }
}

TEST(Staircase, TrialBoundForEveryResponseSequence) {
  for (int n : {1, 2, 3, 10}) {
    const auto table = build_level_table(kRetina, 0.5, n);
    long sessions = 0;
    std::function<void(const StaircaseState&)> walk = [&](const StaircaseState& s) {
      if (s.finished()) {
        ++sessions;
        EXPECT_LE(static_cast<int>(s.trials().size()), max_trials(n));
        EXPECT_EQ(replay(to_session_record(s, kRetina)), s.outcome());
        return;
      }
      ASSERT_LE(static_cast<int>(s.trials().size()), max_trials(n));
      walk(step_forced(s, true));
      walk(step_forced(s, false));
    };
    walk(new_session(table, 1));
    EXPECT_GT(sessions, 0);
  }
}

TEST(Staircase, MoreSensitiveObserverNeverDoesWorse) {
  const auto table = near_table();
  auto rank = [](const std::optional<Acuity>& a) { return a->is_outside_limits() ? 1e9 : a->arcsec(); };
  double prev = -1.0;
  for (double theta = 0.0; theta <= 450.0; theta += 0.5) {
    const double r = rank(simulate(SimulatedObserver::deterministic(theta), table, kRetina, 1).outcome);
    EXPECT_GE(r, prev);
    prev = r;
  }
}

TEST(Staircase, OrientationsAreRoughlyUniform) {
  std::array<int, 4> counts{};
  const int n = 8000;
  for (int t = 0; t < n; ++t) ++counts[static_cast<int>(trial_orientation(12345, static_cast<std::size_t>(t)))];
  for (int c : counts) EXPECT_NEAR(c / static_cast<double>(n), 0.25, 0.02);
  EXPECT_EQ(trial_orientation(1, 3), trial_orientation(1, 3));
  EXPECT_NE(trial_render_seed(1, 0), trial_render_seed(1, 1));
}

TEST(Staircase, SimulatedTimingAndIds) {
  const auto rec = simulate(SimulatedObserver::deterministic(0), far_table(), kRetina, 2);
  EXPECT_EQ(rec.trials.size(), 10u);
  for (const auto& t : rec.trials) EXPECT_EQ(t.elapsed_ms, kSimulatedTrialMs);
}

TEST(Staircase, ReplayDetectsTampering) {
  auto rec = simulate(SimulatedObserver::deterministic(100), near_table(), kRetina, 3);
  EXPECT_EQ(replay(rec), rec.outcome);
  auto tampered = rec;
  tampered.outcome = Acuity::arcsec(40.0);
  EXPECT_THROW(replay(tampered), Error);
  tampered = rec;
  tampered.trials.back().correct = !tampered.trials.back().correct;
  EXPECT_THROW(replay(tampered), Error);
}

TEST(Staircase, PsychometricObserver) {
  const auto o = SimulatedObserver::psychometric(100, 10, 0.05, 1);
  EXPECT_NEAR(o.p_correct(100), 0.25 + 0.70 * 0.5, 1e-12);
  EXPECT_NEAR(o.p_correct(1e6), 0.95, 1e-9);
  EXPECT_NEAR(o.p_correct(-1e6), 0.25, 1e-9);
  const auto a = simulate(o, near_table(), kRetina, 9);
  const auto b = simulate(o, near_table(), kRetina, 9);
  EXPECT_EQ(a.trials, b.trials);
  EXPECT_LE(static_cast<int>(a.trials.size()), max_trials(10));
}

TEST(Staircase, ParseObserver) {
  const auto d = parse_observer("deterministic:40");
  EXPECT_EQ(d.kind, SimulatedObserver::Kind::Deterministic);
  EXPECT_EQ(d.threshold_arcsec, 40.0);
  const auto p = parse_observer("psychometric:100,8,0.02", 4);
  EXPECT_EQ(p.kind, SimulatedObserver::Kind::Psychometric);
  EXPECT_EQ(p.slope, 8.0);
  EXPECT_EQ(p.seed, 4u);
  EXPECT_THROW(parse_observer("bogus"), Error);
  EXPECT_THROW(parse_observer("psychometric:1,2"), Error);
}
