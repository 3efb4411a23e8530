#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cloudhedge/scenarios.hpp"

using namespace cloudhedge;
using doctest::Approx;

TEST_CASE("table of sample premiums matches the published values") {
  const auto rows = scenarios::run_table2();
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].label == "consumer-1y");
  CHECK(std::abs(rows[0].total_normalized - 2.469) <= 0.005);
  CHECK(std::abs(rows[1].total_normalized - 36.504) <= 0.05);
  CHECK(std::abs(rows[2].total_normalized - 2.481) <= 0.005);
  CHECK(std::abs(rows[3].total_normalized - 36.516) <= 0.05);

  // the two categories differ by well under 1% at one year
  CHECK(std::abs(rows[2].total_normalized / rows[0].total_normalized - 1.0) < 0.01);
  // five years costs nearly 15 times one year
  CHECK(std::abs(rows[1].total_normalized / rows[0].total_normalized - 14.8) <= 0.3);
}

TEST_CASE("monthly curve reproduces the published anchors") {
  scenarios::ScenarioConfig config;
  config.label = "consumer-5y";
  config.sigma = scenarios::kConsumerSigma;
  config.duration_years = 5.0;

  const auto curve = scenarios::monthly_curve(config);
  REQUIRE(curve.size() == 60);
  CHECK(curve[0].first == 1);
  CHECK(std::abs(curve[0].second - 0.036) <= 0.001);
  CHECK(std::abs(curve[11].second - 0.356) <= 0.002);
  CHECK(curve[59].second >= 0.89);
  CHECK(curve[59].second <= 0.90);
}

TEST_CASE("monthly curve is strictly increasing when beta plus rate is positive") {
  scenarios::ScenarioConfig config;
  config.sigma = 0.2;
  config.duration_years = 3.0;
  const auto curve = scenarios::monthly_curve(config);
  for (std::size_t k = 1; k < curve.size(); ++k) {
    CHECK(curve[k].second > curve[k - 1].second);
  }
}

TEST_CASE("volatility sweep grows with sigma and is flatter for long contracts") {
  const auto grid = scenarios::default_sigma_grid();
  REQUIRE(grid.size() == 10);
  CHECK(grid[0] == Approx(0.10).epsilon(1e-15));
  CHECK(grid[9] == Approx(0.145).epsilon(1e-15));

  scenarios::ScenarioConfig one_year{"1y", scenarios::kConsumerSigma, 1.0, scenarios::kRate1y};
  scenarios::ScenarioConfig five_year{"5y", scenarios::kConsumerSigma, 5.0, scenarios::kRate5y};
  const auto short_sweep = scenarios::volatility_sweep(one_year, grid);
  const auto long_sweep = scenarios::volatility_sweep(five_year, grid);

  for (Eigen::Index k = 1; k < grid.size(); ++k) {
    CHECK(short_sweep.totals[k] > short_sweep.totals[k - 1]);
    CHECK(long_sweep.totals[k] > long_sweep.totals[k - 1]);
  }
  CHECK(short_sweep.baseline_index == 0);
  CHECK(short_sweep.relative_change[0] == 0.0);

  const auto last = grid.size() - 1;
  CHECK(short_sweep.relative_change[last] > 0.0);
  CHECK(long_sweep.relative_change[last] > 0.0);
  // the one-year contract is the more volatility-sensitive one
  CHECK(short_sweep.relative_change[last] > long_sweep.relative_change[last]);
}

TEST_CASE("volatility sweep validates its grid") {
  scenarios::ScenarioConfig config{"1y", 0.1, 1.0, scenarios::kRate1y};
  CHECK_THROWS_AS(scenarios::volatility_sweep(config, Eigen::ArrayXd()), validation_error);
  Eigen::ArrayXd unsorted(2);
  unsorted << 0.2, 0.1;
  CHECK_THROWS_AS(scenarios::volatility_sweep(config, unsorted), validation_error);
  Eigen::ArrayXd negative(2);
  negative << -0.1, 0.2;
  CHECK_THROWS_AS(scenarios::volatility_sweep(config, negative), validation_error);
}

TEST_CASE("duration sweep is superlinear in the contract length") {
  scenarios::ScenarioConfig base;
  base.sigma = scenarios::kConsumerSigma;
  const Eigen::ArrayXd durations = Eigen::ArrayXd::LinSpaced(60, 1.0, 60.0) / 12.0;
  const auto sweep =
      scenarios::duration_sweep(base, durations, scenarios::default_rate_curve());

  REQUIRE(sweep.totals.size() == 60);
  for (Eigen::Index k = 1; k < sweep.totals.size(); ++k) {
    CHECK(sweep.totals[k] > sweep.totals[k - 1]);
    // per-month cost keeps rising: totals[n]/n strictly increasing
    CHECK(sweep.totals[k] / double(k + 1) > sweep.totals[k - 1] / double(k));
  }
  // five years costs nearly 15 times one year
  CHECK(std::abs(sweep.totals[59] / sweep.totals[11] - 14.8) <= 0.3);
}

TEST_CASE("duration sweep rejects a duration off the period grid") {
  scenarios::ScenarioConfig base;
  Eigen::ArrayXd durations(2);
  durations << 0.5, 0.7;  // 0.7 years is not a whole number of months
  CHECK_THROWS_AS(
      scenarios::duration_sweep(base, durations, scenarios::default_rate_curve()),
      validation_error);
}

TEST_CASE("sweep serialization") {
  scenarios::ScenarioConfig config{"1y", scenarios::kConsumerSigma, 1.0, scenarios::kRate1y};
  const auto sweep = scenarios::volatility_sweep(config, scenarios::default_sigma_grid());

  std::ostringstream csv;
  scenarios::write_csv(sweep, csv);
  const std::string text = csv.str();
  CHECK(text.rfind("x,total_normalized,relative_change\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 11);  // header + 10 rows

  const auto j = scenarios::to_json(sweep);
  CHECK(j.at("axis").size() == 10);
  CHECK(j.at("totals").size() == 10);
  CHECK(j.at("baseline_index") == 0);
  CHECK(j.at("relative_change")[0] == 0.0);
}
