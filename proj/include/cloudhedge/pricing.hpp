#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <concepts>
#include <numbers>

#include "cloudhedge/common.hpp"

namespace cloudhedge::pricing {

// Standard normal distribution function. erfc keeps good relative accuracy
// deep in the left tail; absolute error stays far below the 1e-10 budget.
template <std::floating_point Scalar>
Scalar std_normal_cdf(Scalar x) {
  require(std::isfinite(x), "std_normal_cdf: x must be finite");
  return Scalar(0.5) * std::erfc(-x / std::numbers::sqrt2_v<Scalar>);
}

template <typename Derived>
auto std_normal_cdf(const Eigen::ArrayBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  return x.derived().unaryExpr([](Scalar v) { return std_normal_cdf(v); });
}

// Continuously compounded zero rates keyed by tenor in years. Lookups
// interpolate linearly between quoted tenors and extrapolate flat outside.
struct RateCurve {
  Eigen::ArrayXd tenors;
  Eigen::ArrayXd rates;

  static RateCurve flat(double rate) {
    RateCurve curve;
    curve.tenors = Eigen::ArrayXd::Constant(1, 1.0);
    curve.rates = Eigen::ArrayXd::Constant(1, rate);
    return curve;
  }

  void validate() const {
    require(tenors.size() == rates.size(), "RateCurve: tenors and rates must have equal length");
    require(tenors.size() >= 1, "RateCurve: at least one point required");
    require((tenors > 0.0).all(), "RateCurve: tenors must be positive");
    require(strictly_increasing(tenors), "RateCurve: tenors must be strictly increasing");
    require(rates.isFinite().all(), "RateCurve: rates must be finite");
  }

  double rate_at(double tenor) const {
    validate();
    require(tenor > 0.0, "RateCurve: tenor must be positive");
    if (tenor <= tenors[0]) return rates[0];
    const Eigen::Index last = tenors.size() - 1;
    if (tenor >= tenors[last]) return rates[last];
    Eigen::Index hi = 1;
    while (tenors[hi] < tenor) ++hi;
    const double w = (tenor - tenors[hi - 1]) / (tenors[hi] - tenors[hi - 1]);
    return rates[hi - 1] + w * (rates[hi] - rates[hi - 1]);
  }
};

// A multiperiod contract: n_periods claims at t_i = i * period_length, spot
// price s0, trend decay beta, volatility sigma. The discount rate is read
// from the curve at the contract's final maturity.
struct ContractSpec {
  double s0 = 1.0;
  double beta = 0.0;
  double sigma = 0.0;
  int n_periods = 0;
  double period_length = 1.0 / 12.0;
  RateCurve rate_curve;

  void validate() const {
    require(s0 > 0.0, "ContractSpec: s0 must be positive");
    require(std::isfinite(beta), "ContractSpec: beta must be finite");
    require(sigma > 0.0, "ContractSpec: sigma must be positive");
    require(n_periods >= 1, "ContractSpec: n_periods must be at least 1");
    require(period_length > 0.0, "ContractSpec: period_length must be positive");
    rate_curve.validate();
  }

  double period_time(int i) const { return i * period_length; }
  double maturity() const { return period_time(n_periods); }
  double contract_rate() const { return rate_curve.rate_at(maturity()); }

  Eigen::ArrayXd settlement_times() const {
    Eigen::ArrayXd times(n_periods);
    for (int i = 1; i <= n_periods; ++i) times[i - 1] = period_time(i);
    return times;
  }
};

// Per-period premiums plus their total. Accumulation order is ascending
// period index with compensated summation, so totals are bit-stable.
struct PremiumSchedule {
  Eigen::ArrayXd times;
  Eigen::ArrayXd premiums;
  Eigen::ArrayXd premiums_normalized;
  double total = 0.0;
  double total_normalized = 0.0;
};

// Fair value of a European call under lognormal dynamics.
inline double black_scholes_call(double spot, double strike, double rate, double sigma,
                                 double t) {
  require(spot > 0.0, "black_scholes_call: spot must be positive");
  require(strike > 0.0, "black_scholes_call: strike must be positive");
  require(sigma > 0.0, "black_scholes_call: sigma must be positive");
  require(t > 0.0, "black_scholes_call: t must be positive");
  const double vol_sqrt_t = sigma * std::sqrt(t);
  const double d1 =
      (std::log(spot / strike) + (rate + 0.5 * sigma * sigma) * t) / vol_sqrt_t;
  const double d2 = d1 - vol_sqrt_t;
  return spot * std_normal_cdf(d1) - strike * std::exp(-rate * t) * std_normal_cdf(d2);
}

// Premium per unit of spot for the claim settling at time t, with the strike
// pinned to the expected-price curve: the call reduces to
//   G(d1) - exp(-(beta + rate) t) G(d2),
//   d1,2 = (rate + beta +- sigma^2/2) sqrt(t) / sigma.
// Keeping the normalized value s0-free makes the absolute schedule exactly
// homogeneous in s0.
inline double period_premium_normalized(double beta, double sigma, double rate, double t) {
  require(sigma > 0.0, "period_premium: sigma must be positive");
  require(t > 0.0, "period_premium: t must be positive");
  const double sqrt_t = std::sqrt(t);
  const double d1 = (rate + beta + 0.5 * sigma * sigma) * sqrt_t / sigma;
  const double d2 = (rate + beta - 0.5 * sigma * sigma) * sqrt_t / sigma;
  return std_normal_cdf(d1) - std::exp(-(beta + rate) * t) * std_normal_cdf(d2);
}

inline double period_premium(const ContractSpec& spec, int i) {
  spec.validate();
  require(i >= 1 && i <= spec.n_periods, "period_premium: period index out of range");
  return spec.s0 * period_premium_normalized(spec.beta, spec.sigma, spec.contract_rate(),
                                             spec.period_time(i));
}

inline PremiumSchedule contract_premium(const ContractSpec& spec) {
  spec.validate();
  const int n = spec.n_periods;
  const double rate = spec.contract_rate();

  PremiumSchedule schedule;
  schedule.times = spec.settlement_times();
  schedule.premiums_normalized.resize(n);
  CompensatedSum total_normalized;
  for (int i = 1; i <= n; ++i) {
    const double v = period_premium_normalized(spec.beta, spec.sigma, rate,
                                               spec.period_time(i));
    schedule.premiums_normalized[i - 1] = v;
    total_normalized.add(v);
  }
  schedule.total_normalized = total_normalized.value();
  schedule.premiums = spec.s0 * schedule.premiums_normalized;
  schedule.total = spec.s0 * schedule.total_normalized;
  return schedule;
}

}  // namespace cloudhedge::pricing
