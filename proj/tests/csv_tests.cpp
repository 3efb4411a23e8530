#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "cloudhedge/csv.hpp"

using namespace cloudhedge;
using doctest::Approx;

namespace {

market::PriceSeries parse(const std::string& text) {
  std::istringstream in(text);
  return io::read_price_series_csv(in);
}

}  // namespace

TEST_CASE("dates convert to fractional years since the first row") {
  const auto series = parse(
      "date,price\n"
      "2012-01-01,0.10\n"
      "2012-01-08,0.099\n"
      "2013-01-01,0.095\n");
  REQUIRE(series.times.size() == 3);
  CHECK(series.times[0] == 0.0);
  CHECK(series.times[1] == Approx(7.0 / 365.25).epsilon(1e-15));
  CHECK(series.times[2] == Approx(366.0 / 365.25).epsilon(1e-15));  // 2012 is a leap year
  CHECK(series.prices[1] == 0.099);
}

TEST_CASE("blank lines and padding are tolerated") {
  const auto series = parse(
      "\n"
      " date,price \n"
      " 2020-06-30 , 0.05 \n"
      "\n"
      "2020-07-31,0.049\n");
  REQUIRE(series.times.size() == 2);
  CHECK(series.prices[0] == 0.05);
}

TEST_CASE("a single data row parses; fitting it fails downstream") {
  const auto series = parse("date,price\n2021-01-01,0.2\n");
  REQUIRE(series.times.size() == 1);
  CHECK_THROWS_WITH_AS(market::fit_exponential_trend(series),
                       "fit_exponential_trend: need at least 2 observations",
                       validation_error);
}

TEST_CASE("malformed input is rejected with a line number") {
  CHECK_THROWS_AS(parse(""), validation_error);
  CHECK_THROWS_AS(parse("time,price\n2020-01-01,1\n"), validation_error);
  CHECK_THROWS_AS(parse("date,price\n2020-13-01,1\n"), validation_error);
  CHECK_THROWS_AS(parse("date,price\n2020-02-30,1\n"), validation_error);
  CHECK_THROWS_AS(parse("date,price\n01/02/2020,1\n"), validation_error);
  CHECK_THROWS_AS(parse("date,price\n2020-01-01,zero\n"), validation_error);
  CHECK_THROWS_AS(parse("date,price\n2020-01-01,-1\n"), validation_error);
  CHECK_THROWS_AS(parse("date,price\n2020-01-01,0\n"), validation_error);
  CHECK_THROWS_AS(parse("date,price\n2020-01-01,1,extra\n"), validation_error);
  CHECK_THROWS_AS(parse("date,price\n2020-01-01\n"), validation_error);

  // duplicate and decreasing dates
  CHECK_THROWS_AS(parse("date,price\n2020-01-01,1\n2020-01-01,2\n"), validation_error);
  CHECK_THROWS_AS(parse("date,price\n2020-02-01,1\n2020-01-01,2\n"), validation_error);

  try {
    parse("date,price\n2020-01-01,1\nnot-a-date,2\n");
    FAIL("expected a validation error");
  } catch (const validation_error& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("loading a missing file fails cleanly") {
  CHECK_THROWS_AS(io::load_price_series("/nonexistent/prices.csv"), validation_error);
}
