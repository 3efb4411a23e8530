#pragma once

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <vector>

#include "cloudhedge/common.hpp"
#include "cloudhedge/market_model.hpp"
#include "cloudhedge/pricing.hpp"

namespace cloudhedge::risk {

// One settlement: the actual price compared against the expected-price
// strike, paying the positive part of the difference.
struct ClaimEvent {
  double t = 0.0;
  double actual_price = 0.0;
  double strike = 0.0;
  double payout = 0.0;
};

// Cash flows seen by the insured: the premium leaves at t = 0 (stored as a
// magnitude), claims arrive at t_1..t_n.
struct CashFlowSchedule {
  double premium_at_zero = 0.0;
  std::vector<ClaimEvent> claims;
};

inline double claim_payout(double actual_price, double strike) {
  require(actual_price >= 0.0, "claim_payout: actual_price must be non-negative");
  require(strike >= 0.0, "claim_payout: strike must be non-negative");
  return std::max(actual_price - strike, 0.0);
}

// Replays the contract along a simulated path. The path must contain every
// settlement time exactly; settlement prices are never interpolated.
inline CashFlowSchedule settle_contract(const pricing::ContractSpec& spec,
                                        const market::PricePath& path, double premium) {
  spec.validate();
  require(premium >= 0.0, "settle_contract: premium must be non-negative");
  require(path.times.size() == path.prices.size(),
          "settle_contract: path times and prices must have equal length");

  CashFlowSchedule schedule;
  schedule.premium_at_zero = premium;
  schedule.claims.reserve(spec.n_periods);

  Eigen::Index cursor = 0;
  for (int i = 1; i <= spec.n_periods; ++i) {
    const double t = spec.period_time(i);
    const double tol = 1e-9 * std::max(1.0, t);
    while (cursor < path.times.size() && path.times[cursor] < t - tol) ++cursor;
    if (cursor >= path.times.size() || std::abs(path.times[cursor] - t) > tol) {
      throw validation_error("settle_contract: path is missing settlement time t_" +
                             std::to_string(i));
    }
    const double strike = spec.s0 * std::exp(-spec.beta * t);
    const double actual = path.prices[cursor];
    schedule.claims.push_back(ClaimEvent{t, actual, strike, claim_payout(actual, strike)});
  }
  return schedule;
}

inline void write_csv(const CashFlowSchedule& schedule, std::ostream& out) {
  out << "t,actual,strike,payout\n";
  for (const auto& claim : schedule.claims) {
    out << claim.t << ',' << claim.actual_price << ',' << claim.strike << ','
        << claim.payout << '\n';
  }
}

inline nlohmann::json to_json(const CashFlowSchedule& schedule) {
  nlohmann::json claims = nlohmann::json::array();
  for (const auto& claim : schedule.claims) {
    claims.push_back({{"t", claim.t},
                      {"actual", claim.actual_price},
                      {"strike", claim.strike},
                      {"payout", claim.payout}});
  }
  return {{"premium_at_zero", schedule.premium_at_zero}, {"claims", claims}};
}

}  // namespace cloudhedge::risk
