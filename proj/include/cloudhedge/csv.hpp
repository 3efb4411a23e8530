#pragma once

#include <cctype>
#include <charconv>
#include <chrono>
#include <fstream>
#include <istream>
#include <string>
#include <vector>

#include "cloudhedge/common.hpp"
#include "cloudhedge/market_model.hpp"

namespace cloudhedge::io {

// Days per year used when converting calendar dates to fractional years.
inline constexpr double kDaysPerYear = 365.25;

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t begin = 0;
  std::size_t end = s.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
  return s.substr(begin, end - begin);
}

// Strict ISO-8601 calendar date (YYYY-MM-DD) to a day count.
inline std::chrono::sys_days parse_iso_date(const std::string& text, std::size_t line_no) {
  const auto fail = [&] {
    throw validation_error("csv line " + std::to_string(line_no) + ": invalid date '" +
                           text + "', expected YYYY-MM-DD");
  };
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') fail();
  int year = 0, month = 0, day = 0;
  auto parse_int = [&](std::size_t from, std::size_t len, int& out) {
    const char* first = text.data() + from;
    auto [ptr, ec] = std::from_chars(first, first + len, out);
    if (ec != std::errc{} || ptr != first + len) fail();
  };
  parse_int(0, 4, year);
  parse_int(5, 2, month);
  parse_int(8, 2, day);
  const std::chrono::year_month_day ymd{std::chrono::year{year},
                                        std::chrono::month{unsigned(month)},
                                        std::chrono::day{unsigned(day)}};
  if (!ymd.ok()) fail();
  return std::chrono::sys_days{ymd};
}

}  // namespace detail

// Reads a `date,price` CSV into a PriceSeries. Dates become fractional years
// since the first row; prices keep the configured currency per GB per month.
inline market::PriceSeries read_price_series_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;

  // header
  while (std::getline(in, line)) {
    ++line_no;
    if (!detail::trim(line).empty()) break;
  }
  require(detail::trim(line) == "date,price",
          "csv: expected header 'date,price' on the first non-empty line");

  std::vector<std::chrono::sys_days> dates;
  std::vector<double> prices;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string row = detail::trim(line);
    if (row.empty()) continue;
    const auto comma = row.find(',');
    require(comma != std::string::npos,
            "csv line " + std::to_string(line_no) + ": expected 'date,price'");
    const std::string date_text = detail::trim(row.substr(0, comma));
    const std::string price_text = detail::trim(row.substr(comma + 1));
    require(price_text.find(',') == std::string::npos,
            "csv line " + std::to_string(line_no) + ": too many fields");

    dates.push_back(detail::parse_iso_date(date_text, line_no));

    double price = 0.0;
    const char* first = price_text.data();
    auto [ptr, ec] = std::from_chars(first, first + price_text.size(), price);
    require(ec == std::errc{} && ptr == first + price_text.size(),
            "csv line " + std::to_string(line_no) + ": invalid price '" + price_text + "'");
    require(price > 0.0,
            "csv line " + std::to_string(line_no) + ": price must be strictly positive");
    prices.push_back(price);
  }
  require(!dates.empty(), "csv: no data rows found");

  market::PriceSeries series;
  series.times.resize(Eigen::Index(dates.size()));
  series.prices.resize(Eigen::Index(prices.size()));
  for (std::size_t k = 0; k < dates.size(); ++k) {
    const auto days = std::chrono::duration_cast<std::chrono::days>(dates[k] - dates[0]);
    series.times[Eigen::Index(k)] = double(days.count()) / kDaysPerYear;
    series.prices[Eigen::Index(k)] = prices[k];
  }
  require(strictly_increasing(series.times), "csv: dates must be strictly increasing");
  return series;
}

inline market::PriceSeries load_price_series(const std::string& path) {
  std::ifstream file(path);
  require(file.good(), "cannot open price series file '" + path + "'");
  return read_price_series_csv(file);
}

}  // namespace cloudhedge::io
