#pragma once

#include <json.hpp>

#include <cmath>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "cloudhedge/common.hpp"
#include "cloudhedge/pricing.hpp"

namespace cloudhedge::scenarios {

// Constants of the sample study: trend decay fitted to the disk-price
// survey, price dispersion per customer category, and the two Treasury
// rates quoted for 1- and 5-year horizons.
inline constexpr double kTrendBeta = 0.438;
inline constexpr double kConsumerSigma = 0.0663;
inline constexpr double kBusinessSigma = 0.145;
inline constexpr double kRate1y = 0.002;
inline constexpr double kRate5y = 0.0099;

inline pricing::RateCurve default_rate_curve() {
  pricing::RateCurve curve;
  curve.tenors = Eigen::ArrayXd(2);
  curve.tenors << 1.0, 5.0;
  curve.rates = Eigen::ArrayXd(2);
  curve.rates << kRate1y, kRate5y;
  return curve;
}

struct ScenarioConfig {
  std::string label;
  double sigma = kConsumerSigma;
  double duration_years = 1.0;
  std::optional<double> rate;  // fixed rate; empty means read from the curve
  double beta = kTrendBeta;
  double s0 = 1.0;
  double period_length = 1.0 / 12.0;
};

namespace detail {

inline int period_count(double duration_years, double period_length) {
  require(duration_years > 0.0, "scenario: duration must be positive");
  require(period_length > 0.0, "scenario: period length must be positive");
  const double ratio = duration_years / period_length;
  const int n = static_cast<int>(std::llround(ratio));
  require(n >= 1 && std::abs(ratio - n) <= 1e-9 * std::max(1.0, ratio),
          "scenario: duration must be a positive multiple of the period length");
  return n;
}

inline pricing::ContractSpec to_contract_spec(const ScenarioConfig& config,
                                              const pricing::RateCurve& curve) {
  pricing::ContractSpec spec;
  spec.s0 = config.s0;
  spec.beta = config.beta;
  spec.sigma = config.sigma;
  spec.n_periods = period_count(config.duration_years, config.period_length);
  spec.period_length = config.period_length;
  spec.rate_curve = config.rate ? pricing::RateCurve::flat(*config.rate) : curve;
  return spec;
}

}  // namespace detail

inline pricing::ContractSpec to_contract_spec(const ScenarioConfig& config) {
  return detail::to_contract_spec(config, default_rate_curve());
}

struct LabeledPremium {
  std::string label;
  double total_normalized = 0.0;
};

// The four sample contracts: both customer categories at 1 and 5 years,
// each priced with the rate matching its duration.
inline std::vector<LabeledPremium> run_table2() {
  const struct {
    const char* label;
    double sigma;
    double years;
    double rate;
  } cases[] = {
      {"consumer-1y", kConsumerSigma, 1.0, kRate1y},
      {"consumer-5y", kConsumerSigma, 5.0, kRate5y},
      {"business-1y", kBusinessSigma, 1.0, kRate1y},
      {"business-5y", kBusinessSigma, 5.0, kRate5y},
  };
  std::vector<LabeledPremium> results;
  results.reserve(4);
  for (const auto& c : cases) {
    ScenarioConfig config{c.label, c.sigma, c.years, c.rate};
    const auto schedule = pricing::contract_premium(to_contract_spec(config));
    results.push_back({c.label, schedule.total_normalized});
  }
  return results;
}

// Normalized premium of each monthly claim, one point per month. With no
// fixed rate configured, each period is discounted at the curve rate for its
// own tenor; this is the convention behind the published per-month figures.
inline std::vector<std::pair<int, double>> monthly_curve(const ScenarioConfig& config) {
  const int n = detail::period_count(config.duration_years, config.period_length);
  const auto curve = default_rate_curve();
  std::vector<std::pair<int, double>> points;
  points.reserve(n);
  for (int i = 1; i <= n; ++i) {
    const double t = i * config.period_length;
    const double rate = config.rate ? *config.rate : curve.rate_at(t);
    points.emplace_back(i,
                        pricing::period_premium_normalized(config.beta, config.sigma, rate, t));
  }
  return points;
}

// Sweep output: one normalized total per axis value, plus changes relative
// to the baseline entry.
struct SweepResult {
  Eigen::ArrayXd axis;
  Eigen::ArrayXd totals;
  Eigen::Index baseline_index = 0;
  Eigen::ArrayXd relative_change;
};

inline Eigen::ArrayXd default_sigma_grid() {
  return Eigen::ArrayXd::LinSpaced(10, 0.10, 0.145);
}

// Premium sensitivity to sigma. The baseline is the sigma = 0.1 grid point
// (variance 0.01) when present, otherwise the first entry.
inline SweepResult volatility_sweep(const ScenarioConfig& config,
                                    const Eigen::ArrayXd& sigma_grid) {
  require(sigma_grid.size() >= 1, "volatility_sweep: sigma grid must not be empty");
  require((sigma_grid > 0.0).all(), "volatility_sweep: sigmas must be positive");
  require(strictly_increasing(sigma_grid), "volatility_sweep: sigma grid must be ascending");

  SweepResult result;
  result.axis = sigma_grid;
  result.totals.resize(sigma_grid.size());
  for (Eigen::Index k = 0; k < sigma_grid.size(); ++k) {
    ScenarioConfig point = config;
    point.sigma = sigma_grid[k];
    result.totals[k] = pricing::contract_premium(to_contract_spec(point)).total_normalized;
    if (std::abs(sigma_grid[k] - 0.10) <= 1e-12) result.baseline_index = k;
  }
  result.relative_change = result.totals / result.totals[result.baseline_index] - 1.0;
  return result;
}

// Premium as a function of contract duration, repricing each duration with
// the curve rate at its own maturity.
inline SweepResult duration_sweep(const ScenarioConfig& base,
                                  const Eigen::ArrayXd& durations_years,
                                  const pricing::RateCurve& curve) {
  require(durations_years.size() >= 1, "duration_sweep: duration grid must not be empty");
  require((durations_years > 0.0).all(), "duration_sweep: durations must be positive");
  require(strictly_increasing(durations_years),
          "duration_sweep: duration grid must be ascending");

  SweepResult result;
  result.axis = durations_years;
  result.totals.resize(durations_years.size());
  for (Eigen::Index k = 0; k < durations_years.size(); ++k) {
    ScenarioConfig point = base;
    point.duration_years = durations_years[k];
    point.rate = curve.rate_at(durations_years[k]);
    result.totals[k] = pricing::contract_premium(to_contract_spec(point)).total_normalized;
  }
  result.baseline_index = 0;
  result.relative_change = result.totals / result.totals[0] - 1.0;
  return result;
}

inline void write_csv(const SweepResult& result, std::ostream& out) {
  out << "x,total_normalized,relative_change\n";
  for (Eigen::Index k = 0; k < result.axis.size(); ++k) {
    out << result.axis[k] << ',' << result.totals[k] << ',' << result.relative_change[k]
        << '\n';
  }
}

inline nlohmann::json to_json(const SweepResult& result) {
  nlohmann::json j;
  j["axis"] = std::vector<double>(result.axis.begin(), result.axis.end());
  j["totals"] = std::vector<double>(result.totals.begin(), result.totals.end());
  j["baseline_index"] = result.baseline_index;
  j["relative_change"] =
      std::vector<double>(result.relative_change.begin(), result.relative_change.end());
  return j;
}

}  // namespace cloudhedge::scenarios
