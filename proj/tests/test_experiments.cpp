#include <gtest/gtest.h>

#include "swarmform/experiments.hpp"

using namespace swarmform;

TEST(Presets, ShapeScenarios) {
  EXPECT_EQ(std::get<Line>(line_scenario(1).formation.shape), (Line{-1.0, 5.0}));
  EXPECT_EQ(std::get<Ellipse>(ellipse_scenario(1).formation.shape), (Ellipse{4.0, 2.0}));
  EXPECT_EQ(std::get<Circle>(circle_scenario(1).formation.shape), (Circle{4.0}));
  EXPECT_EQ(std::get<Square>(square_scenario(1).formation.shape), (Square{5.0}));
  const auto s = circle_scenario(7);
  EXPECT_EQ(s.init.count, 12u);
  EXPECT_EQ(s.init.seed, 7u);
  EXPECT_EQ(s.integrator.max_steps, 2000u);
  EXPECT_NO_THROW(s.validate());
}

TEST(Presets, TrackingScenarios) {
  for (Motion m : {Motion::Linear, Motion::Circular}) {
    const auto s = tracking_scenario(m, 3);
    EXPECT_NO_THROW(s.validate());
    EXPECT_TRUE(s.formation.tracking());
    const auto rec = run_scenario(s);
    EXPECT_EQ(rec.steps.size(), 201u);
    EXPECT_EQ(rec.terminal_reason, TerminalReason::MaxSteps);
    for (const auto& snap : rec.steps) ASSERT_TRUE(snap.metrics.tracking_error.has_value());
  }
  const auto lin = tracking_scenario(Motion::Linear, 3);
  const auto init = initial_state(lin);
  for (const auto& a : init.agents) {
    EXPECT_GE(a.position.x1, -15.0);
    EXPECT_LE(a.position.x1, -5.0);
  }
}

TEST(Presets, ShippedTrackingFilesMatchPresets) {
  const std::string dir = SWARMFORM_SCENARIO_DIR;
  auto lin = load_scenario(dir + "/tracking_linear.cfg");
  auto circ = load_scenario(dir + "/tracking_circular.cfg");
  auto ref_lin = tracking_scenario(Motion::Linear, 1);
  auto ref_circ = tracking_scenario(Motion::Circular, 1);
  EXPECT_EQ(lin.formation, ref_lin.formation);
  EXPECT_EQ(circ.formation, ref_circ.formation);
  EXPECT_EQ(lin.init, ref_lin.init);
  EXPECT_EQ(lin.integrator.max_steps, ref_lin.integrator.max_steps);
}

TEST(Ablate, PairsSeedsAndArms) {
  Scenario base = ellipse_scenario(5);
  base.integrator.max_steps = 150;
  const auto res = ablate(base, 3);
  EXPECT_EQ(res.without_repulsion.r, 0.0);
  EXPECT_EQ(res.with_repulsion.r, 0.1);
  EXPECT_EQ(res.without_repulsion.runs, 3u);
  ASSERT_EQ(res.with_repulsion.spacing_cv.size(), 3u);
  EXPECT_LE(res.paired_wins, 3u);
  EXPECT_LE(res.with_repulsion.min_cv, res.with_repulsion.mean_cv);
  EXPECT_GE(res.with_repulsion.max_cv, res.with_repulsion.mean_cv);

  // Each arm entry equals a standalone run of that seed.
  Scenario one = base;
  one.init.seed = 6;
  one.params.r = 0.0;
  EXPECT_EQ(run_scenario(one).steps.back().metrics.spacing_cv, res.without_repulsion.spacing_cv[1]);

  Scenario zero = base;
  zero.params.r = 0.0;
  EXPECT_EQ(ablate(zero, 1).with_repulsion.r, 0.1);
}

TEST(Ablate, DeterministicAcrossCalls) {
  Scenario base = square_scenario(11);
  base.integrator.max_steps = 100;
  const auto a = ablate(base, 4);
  const auto b = ablate(base, 4);
  EXPECT_EQ(a.with_repulsion.spacing_cv, b.with_repulsion.spacing_cv);
  EXPECT_EQ(a.without_repulsion.shape_error, b.without_repulsion.shape_error);
}

TEST(Sweep, OneRowPerValue) {
  Scenario base = circle_scenario(2);
  base.integrator.max_steps = 50;
  const auto rows = sweep(base, "r", {"0", "0.05", "0.1"});
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[1].value, "0.05");
  Scenario ref = base;
  ref.params.r = 0.05;
  EXPECT_EQ(run_scenario(ref).steps.back().metrics, rows[1].final_metrics);
  EXPECT_THROW(sweep(base, "nope", {"1"}), ConfigError);
  EXPECT_THROW(sweep(base, "sigma", {"-1"}), ConfigError);
}
