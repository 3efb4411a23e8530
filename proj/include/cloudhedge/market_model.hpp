#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <string>

#include "cloudhedge/common.hpp"
#include "cloudhedge/rng.hpp"

namespace cloudhedge::market {

// Historical unit-price observations. Times are fractional years since the
// first observation; prices are currency per GB per month.
struct PriceSeries {
  Eigen::ArrayXd times;
  Eigen::ArrayXd prices;

  void validate() const {
    require(times.size() == prices.size(),
            "PriceSeries: times and prices must have equal length");
    require(times.size() >= 1, "PriceSeries: at least one observation required");
    require(strictly_increasing(times), "PriceSeries: times must be strictly increasing");
    require((prices > 0.0).all(), "PriceSeries: prices must be strictly positive");
  }
};

// Expected-price curve P(t) = p0 * exp(-beta * t). A rising market fits
// with beta < 0, so only p0 is sign-constrained.
struct TrendParams {
  double p0 = 0.0;
  double beta = 0.0;

  void validate() const {
    require(p0 > 0.0, "TrendParams: p0 must be positive");
    require(std::isfinite(beta), "TrendParams: beta must be finite");
  }
};

// Lognormal price process S(t) = s0 * exp((-beta - sigma^2/2) t + sigma W(t)).
struct GbmParams {
  double s0 = 0.0;
  double beta = 0.0;
  double sigma = 0.0;

  void validate() const {
    require(s0 > 0.0, "GbmParams: s0 must be positive");
    require(std::isfinite(beta), "GbmParams: beta must be finite");
    require(sigma > 0.0, "GbmParams: sigma must be positive");
  }
};

// One simulated realization, sampled at the requested times.
struct PricePath {
  Eigen::ArrayXd times;
  Eigen::ArrayXd prices;
  std::uint64_t seed = 0;
};

// Least-squares fit of ln(price) against time. The paper's survey data obey
// this model with beta = 0.438 per year.
inline TrendParams fit_exponential_trend(const PriceSeries& series) {
  require(series.times.size() == series.prices.size(),
          "fit_exponential_trend: times and prices must have equal length");
  require(series.times.size() >= 2,
          "fit_exponential_trend: need at least 2 observations");
  require((series.prices > 0.0).all(),
          "fit_exponential_trend: prices must be strictly positive");
  if (series.times.maxCoeff() == series.times.minCoeff()) {
    throw fit_error("fit_exponential_trend: all observation times identical");
  }
  require(strictly_increasing(series.times),
          "fit_exponential_trend: times must be strictly increasing");

  const Eigen::Index n = series.times.size();
  Eigen::MatrixXd design(n, 2);
  design.col(0).setOnes();
  design.col(1) = series.times.matrix();
  const Eigen::VectorXd log_prices = series.prices.log().matrix();
  const Eigen::Vector2d coef = design.colPivHouseholderQr().solve(log_prices);
  return TrendParams{std::exp(coef[0]), -coef[1]};
}

// E[P(t)] = p0 * exp(-beta t); also the strike of the period-t claim.
inline double expected_price(const TrendParams& trend, double t) {
  trend.validate();
  require(t >= 0.0, "expected_price: t must be non-negative");
  return trend.p0 * std::exp(-trend.beta * t);
}

template <typename Derived>
Eigen::ArrayXd expected_price(const TrendParams& trend,
                              const Eigen::ArrayBase<Derived>& times) {
  trend.validate();
  require((times.derived() >= 0.0).all(), "expected_price: times must be non-negative");
  return trend.p0 * (-trend.beta * times.derived()).exp();
}

namespace detail {

// Exact lognormal stepping: log-price increments are Gaussian with mean
// (drift - sigma^2/2) dt and variance sigma^2 dt. One normal draw per step,
// in time order, from NormalStream(seed).
inline PricePath simulate_lognormal_path(double s0, double drift, double sigma,
                                         const Eigen::ArrayXd& times,
                                         std::uint64_t seed) {
  require(times.size() >= 1, "simulate path: at least one sample time required");
  require(times[0] > 0.0, "simulate path: times must start after 0");
  require(strictly_increasing(times), "simulate path: times must be strictly increasing");

  rng::NormalStream normals(seed);
  Eigen::ArrayXd prices(times.size());
  double log_price = std::log(s0);
  double prev_t = 0.0;
  for (Eigen::Index i = 0; i < times.size(); ++i) {
    const double dt = times[i] - prev_t;
    log_price += (drift - 0.5 * sigma * sigma) * dt +
                 sigma * std::sqrt(dt) * normals.next_normal();
    prices[i] = std::exp(log_price);
    prev_t = times[i];
  }
  return PricePath{times, prices, seed};
}

}  // namespace detail

// Physical-measure path of the storage price: drift -beta, so
// E[P(t)] = s0 exp(-beta t) matches the trend curve.
inline PricePath simulate_gbm_path(const GbmParams& params, const Eigen::ArrayXd& times,
                                   std::uint64_t seed) {
  params.validate();
  return detail::simulate_lognormal_path(params.s0, -params.beta, params.sigma, times, seed);
}

// Risk-neutral path: the physical drift is replaced by the risk-free rate,
// the measure under which discounted payoffs price the contract.
inline PricePath simulate_risk_neutral_path(const GbmParams& params, double rate,
                                            const Eigen::ArrayXd& times,
                                            std::uint64_t seed) {
  params.validate();
  require(std::isfinite(rate), "simulate_risk_neutral_path: rate must be finite");
  return detail::simulate_lognormal_path(params.s0, rate, params.sigma, times, seed);
}

enum class VolatilityMode {
  // Sample standard deviation of the price levels themselves. This is the
  // convention the sample study applies to the provider price table, where
  // the dispersion across providers stands in for the process volatility.
  cross_section,
  // Annualized sample standard deviation of log-returns; requires uniform
  // spacing so a single sqrt(dt) scaling applies.
  log_returns,
};

inline double estimate_volatility(const PriceSeries& series,
                                  VolatilityMode mode = VolatilityMode::cross_section) {
  require(series.times.size() == series.prices.size(),
          "estimate_volatility: times and prices must have equal length");
  require((series.prices > 0.0).all(),
          "estimate_volatility: prices must be strictly positive");

  if (mode == VolatilityMode::cross_section) {
    const Eigen::Index n = series.prices.size();
    require(n >= 2, "estimate_volatility: need at least 2 prices");
    const double mean = series.prices.mean();
    return std::sqrt((series.prices - mean).square().sum() / double(n - 1));
  }

  const Eigen::Index n = series.prices.size();
  require(n >= 3, "estimate_volatility: log-return mode needs at least 3 observations");
  require(strictly_increasing(series.times),
          "estimate_volatility: times must be strictly increasing");
  const Eigen::ArrayXd dt = series.times.tail(n - 1) - series.times.head(n - 1);
  const double mean_dt = dt.mean();
  require((dt - mean_dt).abs().maxCoeff() <= 1e-6 * mean_dt,
          "estimate_volatility: log-return mode requires uniformly spaced observations");

  const Eigen::ArrayXd log_returns =
      (series.prices.tail(n - 1) / series.prices.head(n - 1)).log();
  const double mean_r = log_returns.mean();
  const double sd = std::sqrt((log_returns - mean_r).square().sum() / double(n - 2));
  return sd / std::sqrt(mean_dt);
}

}  // namespace cloudhedge::market
