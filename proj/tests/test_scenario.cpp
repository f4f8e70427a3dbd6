#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "swarmform/export.hpp"
#include "swarmform/scenario.hpp"

using namespace swarmform;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "swarmform_test_scenario";
  fs::create_directories(dir);
  return dir / name;
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST(ParseScenario, MinimalConfigTakesDefaults) {
  const auto s = parse_scenario("shape.kind = circle\nshape.r0 = 4\ninit.count = 12\ninit.seed = 9\n");
  EXPECT_EQ(s.params, DynamicsParams{});
  EXPECT_EQ(s.params.k1, 0.1);
  EXPECT_EQ(s.params.k2, 2.0);
  EXPECT_EQ(s.params.sigma, 3.5);
  EXPECT_EQ(s.params.beta, 1.2);
  EXPECT_EQ(s.params.r, 0.1);
  EXPECT_EQ(s.init.count, 12u);
  EXPECT_EQ(s.init.seed, 9u);
  EXPECT_EQ(s.init.lower, -5.0);
  EXPECT_EQ(s.init.upper, 5.0);
  EXPECT_EQ(std::get<Circle>(s.formation.shape).r0, 4.0);
  EXPECT_TRUE(std::holds_alternative<StaticCenter>(s.formation.center));
  EXPECT_EQ(s.integrator.dt, 1.0);
  EXPECT_EQ(s.integrator.scheme, Scheme::Euler);
  EXPECT_EQ(s.integrator.convergence, ConvergenceCriteria{});
  EXPECT_EQ(s.output.snapshot_stride, 10u);  // max_steps 2000 > 500
}

TEST(ParseScenario, StrideDefaultFollowsStepCount) {
  EXPECT_EQ(parse_scenario("shape.kind = line\nintegrator.max_steps = 500\n").output.snapshot_stride, 1u);
  EXPECT_EQ(parse_scenario("shape.kind = line\nintegrator.max_steps = 501\n").output.snapshot_stride, 10u);
}

TEST(ParseScenario, ValidationErrorNamesInvariant) {
  try {
    parse_scenario("shape.kind = circle\ndynamics.sigma = 0\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_STREQ(e.what(), "sigma must be > 0");
  }
}

TEST(ParseScenario, ErrorsCarryLineNumbers) {
  auto line_of = [](const std::string& text) -> std::size_t {
    try {
      parse_scenario(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  EXPECT_EQ(line_of("shape.kind = circle\nbogus = 1\n"), 2u);
  EXPECT_EQ(line_of("# c\nshape.kind = circle\ndynamics.k1 = abc\n"), 3u);
  EXPECT_EQ(line_of("shape.kind = circle\nshape.r0 = 1\nshape.r0 = 2\n"), 3u);
  EXPECT_EQ(line_of("shape.kind = circle\nshape.b = 2\n"), 2u);
  EXPECT_EQ(line_of("shape.kind = hexagon\n"), 1u);
  EXPECT_EQ(line_of("shape.kind = circle\njust words\n"), 2u);
  EXPECT_EQ(line_of("schema = 2\nshape.kind = circle\n"), 1u);
  EXPECT_EQ(line_of("shape.kind = circle\ninit.count = -3\n"), 2u);
  EXPECT_EQ(line_of("shape.kind = circle\ncenter.kind = linear\ncenter.radius = 3\n"), 3u);
  EXPECT_THROW(parse_scenario("init.count = 3\n"), ConfigError);  // shape.kind is required
  EXPECT_THROW(parse_scenario("shape.kind = square\ncenter.kind = linear\n"), ConfigError);
  EXPECT_THROW(parse_scenario("shape.kind = circle\ninit.count = 0\n"), ConfigError);
}

TEST(ParseScenario, CommentsAndWhitespace) {
  const auto s = parse_scenario(
      "  # leading comment\n\n"
      "shape.kind=ellipse   # trailing\n"
      "\tshape.a =  3.5\r\n"
      "output.trajectory_path = runs/a#1.csv\n");
  EXPECT_EQ(std::get<Ellipse>(s.formation.shape).a, 3.5);
  EXPECT_EQ(s.output.trajectory_path, "runs/a#1.csv");
}

TEST(ParseScenario, TrackingKeys) {
  const auto s = parse_scenario(
      "shape.kind = circle\nshape.r0 = 2\ncenter.kind = circular\ncenter.radius = 6\ncenter.period = 200\n"
      "init.relative_to_center = true\n");
  EXPECT_EQ(std::get<CircularCenter>(s.formation.center), (CircularCenter{6.0, 200}));
  EXPECT_TRUE(s.init_relative_to_center);
  const auto init = initial_state(s);
  for (const auto& a : init.agents) EXPECT_GE(a.position.x1, 1.0);
}

TEST(SerializeScenario, RoundTrip) {
  const std::string texts[] = {
      "shape.kind = circle\n",
      "shape.kind = line\nshape.m = -1\nshape.c = 5\ninit.seed = 18446744073709551615\n",
      "shape.kind = ellipse\nshape.a = 4\nshape.b = 2\ndynamics.r = 0\nintegrator.scheme = rk4\n"
      "integrator.dt = 0.1\noutput.metrics_path = m.csv\n",
      "shape.kind = square\nshape.a = 5\ndynamics.k1 = 0.30000000000000004\n",
      "shape.kind = circle\nshape.r0 = 2\ncenter.kind = linear\ncenter.x1 = -10\ncenter.x2 = -10\n"
      "center.v1 = 0.1\ncenter.v2 = 0.1\ninit.relative_to_center = true\n",
      "shape.kind = circle\ncenter.kind = static\ncenter.x1 = 1e-300\ncenter.x2 = 3\n",
  };
  for (const auto& t : texts) {
    const Scenario s = parse_scenario(t);
    const std::string once = serialize_scenario(s);
    EXPECT_EQ(parse_scenario(once), s) << once;
    EXPECT_EQ(serialize_scenario(parse_scenario(once)), once);
  }
}

TEST(WithOverride, FullAndShortKeys) {
  const auto base = parse_scenario("shape.kind = circle\n");
  EXPECT_EQ(with_override(base, "dynamics.r", "0").params.r, 0.0);
  EXPECT_EQ(with_override(base, "sigma", "2.5").params.sigma, 2.5);
  EXPECT_EQ(std::get<Circle>(with_override(base, "r0", "3").formation.shape).r0, 3.0);
  EXPECT_THROW(with_override(base, "nope", "1"), ConfigError);
  EXPECT_THROW(with_override(base, "k1", "-1"), ConfigError);
}

TEST(LoadScenario, MissingFileNamesPath) {
  try {
    load_scenario("/nonexistent/dir/x.cfg");
    FAIL();
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/dir/x.cfg"), std::string::npos);
  }
}

TEST(Export, RowCountsAndHeaders) {
  TrajectoryRecord rec;
  for (int k = 0; k < 3; ++k) rec.steps.push_back({double(k), {{0.5, 1.0}, {-2.0, 0.25}}, {}});
  std::ostringstream traj;
  write_trajectory_csv(traj, rec);
  EXPECT_EQ(count_lines(traj.str()), 7u);
  EXPECT_TRUE(traj.str().starts_with("time,agent_id,x1,x2\n0,0,0.5,1\n0,1,-2,0.25\n1,0,"));

  std::ostringstream metrics;
  write_metrics_csv(metrics, rec);
  EXPECT_TRUE(metrics.str().starts_with("time,shape_error,max_shape_error,spacing_cv,max_speed\n"));
  EXPECT_EQ(count_lines(metrics.str()), 4u);

  rec.tracking = true;
  rec.steps[0].metrics.tracking_error = 0.125;
  rec.steps[0].metrics.centroid_offset = 3.0;
  std::ostringstream tracked;
  write_metrics_csv(tracked, rec);
  EXPECT_TRUE(tracked.str().starts_with(
      "time,shape_error,max_shape_error,spacing_cv,max_speed,tracking_error,centroid_offset\n0,0,0,0,0,0.125,3\n"));
}

TEST(Export, ShortestRoundTripFormatting) {
  for (double v : {0.1, 1.0 / 3.0, -1e-300, 123456789.125, 2.0}) {
    const std::string s = format_double(v);
    EXPECT_EQ(*parse_double(s), v) << s;
  }
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(200.0), "200");
}

TEST(Export, SameScenarioGivesIdenticalFiles) {
  Scenario s = parse_scenario("shape.kind = circle\nshape.r0 = 2\ncenter.kind = linear\ninit.count = 10\n"
                              "init.relative_to_center = true\nintegrator.max_steps = 120\n");
  const auto a = run_scenario(s);
  const auto b = run_scenario(s);
  export_trajectory(a, scratch("a_traj.csv"), scratch("a_metrics.csv"));
  export_trajectory(b, scratch("b_traj.csv"), scratch("b_metrics.csv"));
  EXPECT_EQ(read_file(scratch("a_traj.csv")), read_file(scratch("b_traj.csv")));
  EXPECT_EQ(read_file(scratch("a_metrics.csv")), read_file(scratch("b_metrics.csv")));
  EXPECT_NE(read_file(scratch("a_metrics.csv")).find("tracking_error,centroid_offset"), std::string::npos);
  EXPECT_FALSE(fs::exists(scratch("a_traj.csv.tmp")));
}

TEST(Export, UnwritablePathRaisesIoError) {
  TrajectoryRecord rec;
  rec.steps.push_back({0.0, {{0.0, 0.0}}, {}});
  EXPECT_THROW(export_trajectory(rec, "/nonexistent/dir/t.csv", "/nonexistent/dir/m.csv"), IoError);
  EXPECT_THROW(export_trajectory(TrajectoryRecord{}, scratch("e.csv"), scratch("f.csv")), ConfigError);
}

TEST(Scenarios, ShippedFilesParse) {
  const fs::path dir = fs::path(SWARMFORM_SCENARIO_DIR);
  std::size_t n = 0;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() != ".cfg") continue;
    EXPECT_NO_THROW(load_scenario(entry.path())) << entry.path();
    ++n;
  }
  EXPECT_GE(n, 8u);
}
