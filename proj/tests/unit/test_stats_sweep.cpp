#include <cmath>
#include <sstream>
#include <stdexcept>

#include "doctest.h"

#include "chainform/generators.hpp"
#include "chainform/stats.hpp"
#include "chainform/sweep.hpp"
#include "chainform/traces.hpp"

using namespace chainform;
using doctest::Approx;

TEST_CASE("power-law fit") {
  std::vector<std::pair<double, double>> pts;
  for (double x : {2.0, 4.0, 8.0, 16.0}) pts.push_back({x, x * x});
  Fit f = fit_power_law(pts);
  CHECK(f.slope == Approx(2.0).epsilon(1e-12));
  CHECK(f.r_squared == Approx(1.0).epsilon(1e-12));

  pts.clear();
  for (double x : {1.0, 3.0, 5.0}) pts.push_back({x, 7 * x});
  f = fit_power_law(pts);
  CHECK(f.slope == Approx(1.0).epsilon(1e-12));
  CHECK(f.intercept == Approx(std::log(7.0)).epsilon(1e-12));

  CHECK_THROWS_AS(fit_power_law(std::vector<std::pair<double, double>>{{1, 1}, {2, 4}}), std::invalid_argument);
  CHECK_THROWS_AS(fit_power_law(std::vector<std::pair<double, double>>{{1, 1}, {2, 0}, {3, 9}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(fit_power_law(std::vector<std::pair<double, double>>{{-1, 1}, {2, 4}, {3, 9}}),
                  std::invalid_argument);
}

TEST_CASE("affine fit and median") {
  const std::vector<double> x{0, 1, 2, 3}, y{1, 3, 5, 7};
  const Fit f = fit_affine(x, y);
  CHECK(f.slope == Approx(2));
  CHECK(f.intercept == Approx(1));
  CHECK(median({3, 1, 2}) == 2);
  CHECK(median({4, 1, 3, 2}) == 2.5);
}

TEST_CASE("names round-trip") {
  for (const char* s : {"max-gtm", "one-fixed-gtm", "tau-gtm", "max-mob", "naive-max-mob"})
    CHECK(to_string(parse_strategy(s)) == s);
  CHECK(engine_of(StrategyName::MaxMoB) == Engine::Continuous);
  CHECK(engine_of(StrategyName::TauGtM) == Engine::Discrete);
  CHECK_THROWS(parse_strategy("gtm"));
  CHECK_THROWS(parse_engine("hybrid"));
}

TEST_CASE("spec validation") {
  ExperimentSpec s;
  CHECK_NOTHROW(s.validate());
  s.strategy = StrategyName::MaxMoB;
  CHECK_THROWS(s.validate());
  s = {};
  s.seeds.clear();
  CHECK_THROWS(s.validate());
  s = {};
  s.max_rounds = 0;
  CHECK_THROWS(s.validate());
}

TEST_CASE("sweep over marching chains stops in zero rounds") {
  ExperimentSpec s;
  s.family = Family::MarchingChain;
  s.ns = {4, 10, 20};
  const SweepResult r = run_sweep(s, 1);
  REQUIRE(r.rows.size() == 3);
  for (const SweepRow& row : r.rows) {
    CHECK(row.runtime == 0.0);
    CHECK(row.outcome == "EpsMarching");
    CHECK(row.error.empty());
  }
}

TEST_CASE("delta-V sweep rounds grow with n and fit near n^2") {
  ExperimentSpec s;
  s.family = Family::DiscreteDeltaV;
  s.ns = {8, 16, 32, 64};
  s.deltas = {0.1};
  const SweepResult r = run_sweep(s, 2);
  REQUIRE(r.rows.size() == 4);
  for (std::size_t k = 1; k < r.rows.size(); ++k) CHECK(r.rows[k].runtime > r.rows[k - 1].runtime);
  for (const SweepRow& row : r.rows) CHECK(row.outcome == "EpsMaxChain");
  REQUIRE(r.fit.has_value());
  CHECK(r.fit->slope > 1.5);
  CHECK(r.fit->slope < 2.5);
}

TEST_CASE("sweep output is deterministic across worker counts") {
  ExperimentSpec s;
  s.ns = {6, 9};
  s.seeds = {1, 2, 3, 4};
  std::ostringstream a, b;
  write_sweep_csv(a, run_sweep(s, 1));
  write_sweep_csv(b, run_sweep(s, 3));
  CHECK(a.str() == b.str());

  std::istringstream in(a.str());
  CHECK(validate_csv(in, kSweepCsvHeader, false) == 8);
}

TEST_CASE("failing points become error rows") {
  ExperimentSpec s;
  s.family = Family::DiscreteDeltaV;
  s.ns = {9, 10};  // odd n is not a valid delta-V
  const SweepResult r = run_sweep(s, 1);
  REQUIRE(r.rows.size() == 2);
  CHECK(r.rows[0].outcome == "Error");
  CHECK_FALSE(r.rows[0].error.empty());
  CHECK(r.rows[1].outcome == "EpsMaxChain");
}

TEST_CASE("continuous sweep runs through the same driver") {
  ExperimentSpec s;
  s.engine = Engine::Continuous;
  s.strategy = StrategyName::MaxMoB;
  s.family = Family::ContinuousDeltaV;
  s.ns = {9};
  s.deltas = {0.5};
  s.t_max = 200;
  const SweepResult r = run_sweep(s, 1);
  REQUIRE(r.rows.size() == 1);
  CHECK(r.rows[0].outcome == "EpsMaxChain");
  CHECK(r.rows[0].runtime == Approx(11.136).epsilon(0.01));
  const std::string j = sweep_json(r, 0.5);
  CHECK(j.find("\"strategy\"") != std::string::npos);
}

TEST_CASE("trace and metrics CSV schemas") {
  DiscreteRunOptions o;
  o.record = TraceMode::full();
  const DiscreteRunResult d = run_discrete(DiscreteStrategy::max_gtm(), gen_discrete_delta_v(8, 0.2), 1e-3, 100000, o);
  std::stringstream t, m;
  write_trace_csv(t, d.trace);
  write_discrete_metrics_csv(m, d.trace);
  CHECK(validate_csv(t, kTraceCsvHeader) == d.trace.size() * 8);
  CHECK(validate_csv(m, kDiscreteMetricsHeader) == d.trace.size());

  const MobParams mp = make_mob_params(0.25);
  const ContinuousRunResult c = integrate(gen_continuous_delta_v(9, 0.5), mp, 1e-3, 1e-3, 100, Sampler::every(0.1));
  std::stringstream ct, cm;
  write_trace_csv(ct, c.trace);
  const auto w = outer_angle_watch(c.trace, mp.dt);
  write_continuous_metrics_csv(cm, w);
  CHECK(validate_csv(ct, kTraceCsvHeader) == c.trace.size() * 9);
  CHECK(validate_csv(cm, kContinuousMetricsHeader) == w.size());

  std::istringstream bad_header("t,x\n1,2\n");
  CHECK_THROWS_AS(validate_csv(bad_header, kTraceCsvHeader), std::runtime_error);
  std::istringstream short_row("t,i,x,y\n0,1,0.5\n");
  CHECK_THROWS_AS(validate_csv(short_row, kTraceCsvHeader), std::runtime_error);
  std::istringstream text("t,i,x,y\n0,1,zero,0\n");
  CHECK_THROWS_AS(validate_csv(text, kTraceCsvHeader), std::runtime_error);
  std::istringstream nan_ok("t,i,x,y\n0,1,nan,inf\n");
  CHECK(validate_csv(nan_ok, kTraceCsvHeader) == 1);
}
