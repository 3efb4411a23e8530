// Command-line front end for the storage-price insurance pricer.
//
// Subcommands: fit, quote, verify, sweep, settle. Exit codes: 0 success,
// 2 validation or input error, 3 verification failure. Every seeded command
// is byte-deterministic for fixed flags.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cloudhedge/common.hpp"
#include "cloudhedge/csv.hpp"
#include "cloudhedge/market_model.hpp"
#include "cloudhedge/monte_carlo.hpp"
#include "cloudhedge/pricing.hpp"
#include "cloudhedge/risk.hpp"
#include "cloudhedge/rng.hpp"
#include "cloudhedge/scenarios.hpp"

namespace {

using nlohmann::json;
using namespace cloudhedge;

constexpr int kExitValidation = 2;
constexpr int kExitVerifyFailed = 3;

struct AppConfig {
  std::string profile = "consumer";
  double beta = scenarios::kTrendBeta;
  std::optional<double> sigma;  // default depends on profile
  double s0 = 1.0;
  std::optional<double> rate;   // fixed rate; otherwise read from the curve
  std::string rate_curve = "1:0.002,5:0.0099";
  double period_length = 1.0 / 12.0;
  std::optional<int> n_periods;
  double years = 1.0;
  std::uint64_t seed = 42;
  long n_paths = 100000;
  std::string format = "table";
  std::string out_path;
  int precision = 4;
};

std::string fmt_g(double v, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
  return buf;
}

// "1:0.002,5:0.0099" -> RateCurve
pricing::RateCurve parse_rate_curve(const std::string& text) {
  std::vector<double> tenors, rates;
  std::stringstream stream(text);
  std::string entry;
  while (std::getline(stream, entry, ',')) {
    const auto colon = entry.find(':');
    require(colon != std::string::npos,
            "rate curve entry '" + entry + "' must look like tenor:rate");
    try {
      tenors.push_back(std::stod(entry.substr(0, colon)));
      rates.push_back(std::stod(entry.substr(colon + 1)));
    } catch (const std::exception&) {
      throw validation_error("rate curve entry '" + entry + "' is not numeric");
    }
  }
  require(!tenors.empty(), "rate curve must have at least one tenor:rate point");
  pricing::RateCurve curve;
  curve.tenors = Eigen::Map<Eigen::ArrayXd>(tenors.data(), Eigen::Index(tenors.size()));
  curve.rates = Eigen::Map<Eigen::ArrayXd>(rates.data(), Eigen::Index(rates.size()));
  curve.validate();
  return curve;
}

// "0.1:0.145:0.005" (inclusive range) or "0.1,0.12,0.145"
Eigen::ArrayXd parse_grid(const std::string& text) {
  std::vector<double> values;
  try {
    if (text.find(':') != std::string::npos) {
      double lo = 0, hi = 0, step = 0;
      std::stringstream stream(text);
      std::string part;
      std::vector<double> parts;
      while (std::getline(stream, part, ':')) parts.push_back(std::stod(part));
      require(parts.size() == 3, "grid range must be lo:hi:step");
      lo = parts[0], hi = parts[1], step = parts[2];
      require(step > 0 && hi >= lo, "grid range must have positive step and hi >= lo");
      for (double v = lo; v <= hi + 1e-12 * step; v += step) values.push_back(v);
    } else {
      std::stringstream stream(text);
      std::string part;
      while (std::getline(stream, part, ',')) values.push_back(std::stod(part));
    }
  } catch (const validation_error&) {
    throw;
  } catch (const std::exception&) {
    throw validation_error("grid '" + text + "' is not numeric");
  }
  require(!values.empty(), "grid must not be empty");
  return Eigen::Map<Eigen::ArrayXd>(values.data(), Eigen::Index(values.size()));
}

double resolved_sigma(const AppConfig& cfg) {
  if (cfg.sigma) return *cfg.sigma;
  if (cfg.profile == "consumer") return scenarios::kConsumerSigma;
  if (cfg.profile == "business") return scenarios::kBusinessSigma;
  throw validation_error("unknown profile '" + cfg.profile +
                         "' (expected consumer or business)");
}

int resolved_periods(const AppConfig& cfg) {
  if (cfg.n_periods) {
    require(*cfg.n_periods >= 1, "n_periods must be at least 1");
    return *cfg.n_periods;
  }
  const double ratio = cfg.years / cfg.period_length;
  const int n = static_cast<int>(std::llround(ratio));
  require(cfg.years > 0 && n >= 1 && std::abs(ratio - n) <= 1e-9 * std::max(1.0, ratio),
          "years must be a positive multiple of the period length");
  return n;
}

pricing::ContractSpec build_spec(const AppConfig& cfg) {
  pricing::ContractSpec spec;
  spec.s0 = cfg.s0;
  spec.beta = cfg.beta;
  spec.sigma = resolved_sigma(cfg);
  spec.n_periods = resolved_periods(cfg);
  spec.period_length = cfg.period_length;
  spec.rate_curve =
      cfg.rate ? pricing::RateCurve::flat(*cfg.rate) : parse_rate_curve(cfg.rate_curve);
  spec.validate();
  return spec;
}

// key=value configuration file; '#' starts a comment; unknown keys rejected.
void apply_config_file(const std::string& path, AppConfig& cfg) {
  std::ifstream file(path);
  require(file.good(), "cannot open config file '" + path + "'");
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(file, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = io::detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    require(eq != std::string::npos,
            "config line " + std::to_string(line_no) + ": expected key=value");
    const std::string key = io::detail::trim(line.substr(0, eq));
    const std::string value = io::detail::trim(line.substr(eq + 1));
    require(!value.empty(), "config key '" + key + "' has no value");

    auto as_double = [&] {
      try {
        return std::stod(value);
      } catch (const std::exception&) {
        throw validation_error("config key '" + key + "': invalid number '" + value + "'");
      }
    };
    auto as_long = [&] {
      try {
        return std::stol(value);
      } catch (const std::exception&) {
        throw validation_error("config key '" + key + "': invalid integer '" + value + "'");
      }
    };

    if (key == "profile") {
      cfg.profile = value;
    } else if (key == "beta") {
      cfg.beta = as_double();
    } else if (key == "sigma") {
      cfg.sigma = as_double();
    } else if (key == "s0") {
      cfg.s0 = as_double();
    } else if (key == "rate") {
      cfg.rate = as_double();
    } else if (key == "rate_curve") {
      cfg.rate_curve = value;
    } else if (key == "period_length") {
      cfg.period_length = as_double();
    } else if (key == "n_periods") {
      cfg.n_periods = static_cast<int>(as_long());
    } else if (key == "years") {
      cfg.years = as_double();
    } else if (key == "seed") {
      cfg.seed = static_cast<std::uint64_t>(as_long());
    } else if (key == "n_paths") {
      cfg.n_paths = as_long();
    } else if (key == "format") {
      cfg.format = value;
    } else if (key == "precision") {
      cfg.precision = static_cast<int>(as_long());
    } else {
      throw validation_error("config line " + std::to_string(line_no) + ": unknown key '" +
                             key + "'");
    }
  }
}

// Writes to --out when given, stdout otherwise.
class OutputTarget {
 public:
  explicit OutputTarget(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      require(file_.good(), "cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

void check_format(const std::string& format) {
  require(format == "table" || format == "csv" || format == "json",
          "format must be table, csv or json");
}

void emit_json(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

// ---------------------------------------------------------------------------
// fit

int cmd_fit(const AppConfig& cfg, const std::string& csv_path, const std::string& vol_mode) {
  const auto series = io::load_price_series(csv_path);
  const auto trend = market::fit_exponential_trend(series);
  const auto mode = [&] {
    if (vol_mode == "cross-section") return market::VolatilityMode::cross_section;
    if (vol_mode == "log-returns") return market::VolatilityMode::log_returns;
    throw validation_error("vol-mode must be cross-section or log-returns");
  }();
  const double volatility = market::estimate_volatility(series, mode);
  const double span = series.times[series.times.size() - 1] - series.times[0];

  OutputTarget target(cfg.out_path);
  auto& out = target.stream();
  if (cfg.format == "json") {
    emit_json(out, json{{"p0", trend.p0},
                        {"beta", trend.beta},
                        {"volatility", volatility},
                        {"vol_mode", vol_mode},
                        {"n_observations", series.times.size()},
                        {"span_years", span}});
  } else if (cfg.format == "csv") {
    out << "key,value\n";
    out << "p0," << fmt_g(trend.p0, cfg.precision) << '\n';
    out << "beta," << fmt_g(trend.beta, cfg.precision) << '\n';
    out << "volatility," << fmt_g(volatility, cfg.precision) << '\n';
    out << "n_observations," << series.times.size() << '\n';
    out << "span_years," << fmt_g(span, cfg.precision) << '\n';
  } else {
    out << "fitted trend: p0 = " << fmt_g(trend.p0, cfg.precision)
        << ", beta = " << fmt_g(trend.beta, cfg.precision) << " per year\n";
    out << "volatility (" << vol_mode << "): " << fmt_g(volatility, cfg.precision) << '\n';
    out << "observations: " << series.times.size() << " spanning "
        << fmt_g(span, cfg.precision) << " years\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// quote

json quote_json(const pricing::ContractSpec& spec, const pricing::PremiumSchedule& schedule) {
  json rows = json::array();
  for (Eigen::Index k = 0; k < schedule.times.size(); ++k) {
    rows.push_back({{"month", k + 1},
                    {"t", schedule.times[k]},
                    {"premium", schedule.premiums[k]},
                    {"premium_normalized", schedule.premiums_normalized[k]}});
  }
  return json{{"s0", spec.s0},
              {"beta", spec.beta},
              {"sigma", spec.sigma},
              {"rate", spec.contract_rate()},
              {"n_periods", spec.n_periods},
              {"period_length", spec.period_length},
              {"schedule", rows},
              {"total", schedule.total},
              {"total_normalized", schedule.total_normalized}};
}

int cmd_quote(const AppConfig& cfg) {
  const auto spec = build_spec(cfg);
  const auto schedule = pricing::contract_premium(spec);

  OutputTarget target(cfg.out_path);
  auto& out = target.stream();
  if (cfg.format == "json") {
    emit_json(out, quote_json(spec, schedule));
    return 0;
  }
  if (cfg.format == "csv") {
    out << "month,t,premium,premium_normalized\n";
    for (Eigen::Index k = 0; k < schedule.times.size(); ++k) {
      out << (k + 1) << ',' << fmt_g(schedule.times[k], 10) << ','
          << fmt_g(schedule.premiums[k], 10) << ','
          << fmt_g(schedule.premiums_normalized[k], 10) << '\n';
    }
    out << "total," << fmt_g(spec.maturity(), 10) << ',' << fmt_g(schedule.total, 10) << ','
        << fmt_g(schedule.total_normalized, 10) << '\n';
    return 0;
  }

  out << "contract: s0 = " << fmt_g(spec.s0, cfg.precision)
      << ", beta = " << fmt_g(spec.beta, cfg.precision)
      << ", sigma = " << fmt_g(spec.sigma, cfg.precision)
      << ", rate = " << fmt_g(spec.contract_rate(), cfg.precision) << ", periods = "
      << spec.n_periods << " x " << fmt_g(spec.period_length, cfg.precision) << " years\n";
  out << "month        t      premium   premium/s0\n";
  for (Eigen::Index k = 0; k < schedule.times.size(); ++k) {
    char row[128];
    std::snprintf(row, sizeof(row), "%5lld %8s %12s %12s\n",
                  static_cast<long long>(k + 1), fmt_g(schedule.times[k], 4).c_str(),
                  fmt_g(schedule.premiums[k], cfg.precision).c_str(),
                  fmt_g(schedule.premiums_normalized[k], cfg.precision).c_str());
    out << row;
  }
  out << "total premium: " << fmt_g(schedule.total, cfg.precision)
      << "  (normalized: " << fmt_g(schedule.total_normalized, cfg.precision) << ")\n";
  return 0;
}

// ---------------------------------------------------------------------------
// verify

int cmd_verify(const AppConfig& cfg, double z_threshold, bool self_test) {
  const auto spec = build_spec(cfg);

  // In self-test mode the closed form is priced with a deliberately wrong
  // rate (+1% absolute) while the simulation keeps the true one, so the
  // z-score check must trip. Exercises the detector, not the pricer.
  auto closed_spec = spec;
  if (self_test) {
    closed_spec.rate_curve = pricing::RateCurve::flat(spec.contract_rate() + 0.01);
  }
  const double closed = pricing::contract_premium(closed_spec).total;
  const auto estimate = mc::mc_contract_price(spec, cfg.n_paths, cfg.seed);
  const double z = (estimate.mean - closed) / estimate.std_error;
  const bool pass = std::abs(z) <= z_threshold;

  OutputTarget target(cfg.out_path);
  auto& out = target.stream();
  if (cfg.format == "json") {
    emit_json(out, json{{"closed_form", closed},
                        {"mc_mean", estimate.mean},
                        {"mc_std_error", estimate.std_error},
                        {"z", z},
                        {"z_threshold", z_threshold},
                        {"n_paths", estimate.n_paths},
                        {"seed", estimate.seed},
                        {"self_test", self_test},
                        {"pass", pass}});
  } else if (cfg.format == "csv") {
    out << "key,value\n";
    out << "closed_form," << fmt_g(closed, 10) << '\n';
    out << "mc_mean," << fmt_g(estimate.mean, 10) << '\n';
    out << "mc_std_error," << fmt_g(estimate.std_error, 10) << '\n';
    out << "z," << fmt_g(z, 6) << '\n';
    out << "pass," << (pass ? 1 : 0) << '\n';
  } else {
    out << "closed form:   " << fmt_g(closed, 10) << '\n';
    out << "monte carlo:   " << fmt_g(estimate.mean, 10) << " +/- "
        << fmt_g(estimate.std_error, 6) << " (" << estimate.n_paths
        << " paths, seed " << estimate.seed << ")\n";
    out << "z-score:       " << fmt_g(z, 6) << " (threshold " << fmt_g(z_threshold, 4)
        << ")\n";
    out << "verdict:       " << (pass ? "PASS" : "FAIL") << '\n';
  }
  return pass ? 0 : kExitVerifyFailed;
}

// ---------------------------------------------------------------------------
// sweep

int cmd_sweep(const AppConfig& cfg, const std::string& kind, const std::string& grid_text) {
  scenarios::ScenarioConfig base;
  base.label = cfg.profile;
  base.sigma = resolved_sigma(cfg);
  base.beta = cfg.beta;
  base.s0 = cfg.s0;
  base.period_length = cfg.period_length;
  base.duration_years = resolved_periods(cfg) * cfg.period_length;

  const auto curve =
      cfg.rate ? pricing::RateCurve::flat(*cfg.rate) : parse_rate_curve(cfg.rate_curve);

  scenarios::SweepResult result;
  if (kind == "volatility") {
    // One fixed rate for the whole sweep, read at the contract maturity.
    base.rate = cfg.rate ? *cfg.rate : curve.rate_at(base.duration_years);
    const Eigen::ArrayXd grid =
        grid_text.empty() ? scenarios::default_sigma_grid() : parse_grid(grid_text);
    result = scenarios::volatility_sweep(base, grid);
  } else if (kind == "duration") {
    base.rate.reset();
    const Eigen::ArrayXd grid = grid_text.empty()
                                    ? (Eigen::ArrayXd::LinSpaced(60, 1, 60) / 12.0).eval()
                                    : parse_grid(grid_text);
    result = scenarios::duration_sweep(base, grid, curve);
  } else {
    throw validation_error("sweep kind must be volatility or duration");
  }

  OutputTarget target(cfg.out_path);
  auto& out = target.stream();
  if (cfg.format == "json") {
    json j = scenarios::to_json(result);
    j["kind"] = kind;
    emit_json(out, j);
  } else if (cfg.format == "table") {
    out << "x          total_normalized  relative_change\n";
    for (Eigen::Index k = 0; k < result.axis.size(); ++k) {
      char row[128];
      std::snprintf(row, sizeof(row), "%-10s %-17s %s\n",
                    fmt_g(result.axis[k], 6).c_str(),
                    fmt_g(result.totals[k], cfg.precision).c_str(),
                    fmt_g(result.relative_change[k], cfg.precision).c_str());
      out << row;
    }
  } else {
    scenarios::write_csv(result, out);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// settle

int cmd_settle(const AppConfig& cfg, bool trend_path) {
  const auto spec = build_spec(cfg);
  const auto times = spec.settlement_times();
  const double premium = pricing::contract_premium(spec).total;

  OutputTarget target(cfg.out_path);
  auto& out = target.stream();

  if (trend_path) {
    // Deterministic replay along the expected-price curve itself.
    market::PricePath path;
    path.times = times;
    path.prices = spec.s0 * (-spec.beta * times).exp();
    path.seed = cfg.seed;
    const auto schedule = risk::settle_contract(spec, path, premium);
    if (cfg.format == "json") {
      emit_json(out, risk::to_json(schedule));
    } else if (cfg.format == "csv") {
      risk::write_csv(schedule, out);
    } else {
      out << "premium at t=0: " << fmt_g(schedule.premium_at_zero, cfg.precision) << '\n';
      out << "    t       actual       strike       payout\n";
      for (const auto& claim : schedule.claims) {
        char row[160];
        std::snprintf(row, sizeof(row), "%8s %12s %12s %12s\n",
                      fmt_g(claim.t, 4).c_str(),
                      fmt_g(claim.actual_price, cfg.precision).c_str(),
                      fmt_g(claim.strike, cfg.precision).c_str(),
                      fmt_g(claim.payout, cfg.precision).c_str());
        out << row;
      }
    }
    return 0;
  }

  require(cfg.n_paths >= 2, "settle: n_paths must be at least 2");
  const double rate = spec.contract_rate();
  market::GbmParams params{spec.s0, spec.beta, spec.sigma};
  Eigen::ArrayXd discounts = (-rate * times).exp();

  std::vector<double> totals(std::size_t(cfg.n_paths));
  long periods_paid = 0;
  for (long k = 0; k < cfg.n_paths; ++k) {
    const auto path = market::simulate_risk_neutral_path(
        params, rate, times, rng::substream_seed(cfg.seed, std::uint64_t(k)));
    const auto schedule = risk::settle_contract(spec, path, premium);
    CompensatedSum discounted;
    for (std::size_t j = 0; j < schedule.claims.size(); ++j) {
      discounted.add(discounts[Eigen::Index(j)] * schedule.claims[j].payout);
      if (schedule.claims[j].payout > 0.0) ++periods_paid;
    }
    totals[std::size_t(k)] = discounted.value();
  }

  double mean = 0;
  for (double v : totals) mean += v;
  mean /= double(totals.size());
  double var = 0;
  for (double v : totals) var += (v - mean) * (v - mean);
  var /= double(totals.size() - 1);
  const double std_error = std::sqrt(var / double(totals.size()));

  std::vector<double> sorted = totals;
  std::sort(sorted.begin(), sorted.end());
  const auto quantile = [&](double p) {
    const auto idx = std::size_t(p * double(sorted.size() - 1) + 0.5);
    return sorted[std::min(idx, sorted.size() - 1)];
  };
  const double payout_fraction =
      double(periods_paid) / (double(cfg.n_paths) * double(spec.n_periods));

  if (cfg.format == "json") {
    emit_json(out, json{{"premium", premium},
                        {"mean_discounted_claims", mean},
                        {"std_error", std_error},
                        {"quantiles",
                         {{"q05", quantile(0.05)},
                          {"q25", quantile(0.25)},
                          {"q50", quantile(0.50)},
                          {"q75", quantile(0.75)},
                          {"q95", quantile(0.95)}}},
                        {"payout_period_fraction", payout_fraction},
                        {"n_paths", cfg.n_paths},
                        {"seed", cfg.seed}});
  } else if (cfg.format == "csv") {
    out << "key,value\n";
    out << "premium," << fmt_g(premium, 10) << '\n';
    out << "mean_discounted_claims," << fmt_g(mean, 10) << '\n';
    out << "std_error," << fmt_g(std_error, 10) << '\n';
    out << "q05," << fmt_g(quantile(0.05), 10) << '\n';
    out << "q25," << fmt_g(quantile(0.25), 10) << '\n';
    out << "q50," << fmt_g(quantile(0.50), 10) << '\n';
    out << "q75," << fmt_g(quantile(0.75), 10) << '\n';
    out << "q95," << fmt_g(quantile(0.95), 10) << '\n';
    out << "payout_period_fraction," << fmt_g(payout_fraction, 10) << '\n';
  } else {
    out << "closed-form premium:      " << fmt_g(premium, 10) << '\n';
    out << "mean discounted claims:   " << fmt_g(mean, 10) << " +/- "
        << fmt_g(std_error, 6) << " (" << cfg.n_paths << " paths, seed " << cfg.seed
        << ")\n";
    out << "claim total quantiles:    q05 " << fmt_g(quantile(0.05), cfg.precision)
        << ", q25 " << fmt_g(quantile(0.25), cfg.precision) << ", q50 "
        << fmt_g(quantile(0.50), cfg.precision) << ", q75 "
        << fmt_g(quantile(0.75), cfg.precision) << ", q95 "
        << fmt_g(quantile(0.95), cfg.precision) << '\n';
    out << "periods with payout:      " << fmt_g(100.0 * payout_fraction, 4) << "%\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pricing engine for insurance against cloud-storage price rises"};
  app.require_subcommand(1);

  AppConfig cfg;

  // A config file provides defaults; explicit flags override it. The file is
  // applied before CLI11 writes any flag values, which yields exactly that
  // precedence.
  std::string config_path;
  for (int k = 1; k < argc; ++k) {
    const std::string arg = argv[k];
    if (arg == "--config" && k + 1 < argc) {
      config_path = argv[k + 1];
    } else if (arg.rfind("--config=", 0) == 0) {
      config_path = arg.substr(9);
    }
  }
  try {
    if (!config_path.empty()) apply_config_file(config_path, cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }

  app.add_option("--config", config_path, "key=value configuration file");
  app.add_option("--format", cfg.format, "output format: table, csv or json");
  app.add_option("--seed", cfg.seed, "random seed for simulation commands");
  app.add_option("--out", cfg.out_path, "write output to this file instead of stdout");
  app.add_option("--precision", cfg.precision, "significant digits in table output");

  const auto add_contract_options = [&](CLI::App* cmd) {
    cmd->add_option("--profile", cfg.profile, "consumer or business (sets sigma default)");
    cmd->add_option("--beta", cfg.beta, "trend decay rate per year");
    cmd->add_option("--sigma", cfg.sigma, "price volatility per sqrt(year)");
    cmd->add_option("--s0", cfg.s0, "current unit price per GB per month");
    cmd->add_option("--rate", cfg.rate, "fixed risk-free rate (overrides the curve)");
    cmd->add_option("--rate-curve", cfg.rate_curve, "tenor:rate points, e.g. 1:0.002,5:0.0099");
    cmd->add_option("--years", cfg.years, "contract duration in years");
    cmd->add_option("--n-periods", cfg.n_periods, "number of settlement periods");
    cmd->add_option("--period-length", cfg.period_length, "period length in years");
    cmd->fallthrough();
  };

  auto* fit = app.add_subcommand("fit", "fit the price trend from a date,price CSV");
  std::string csv_path;
  std::string vol_mode = "cross-section";
  fit->add_option("csv", csv_path, "input CSV file")->required();
  fit->add_option("--vol-mode", vol_mode, "volatility estimator: cross-section or log-returns");
  fit->fallthrough();

  auto* quote = app.add_subcommand("quote", "price a contract with the closed form");
  add_contract_options(quote);

  auto* verify = app.add_subcommand("verify", "compare the closed form against Monte Carlo");
  add_contract_options(verify);
  double z_threshold = 4.0;
  bool self_test = false;
  verify->add_option("--n-paths", cfg.n_paths, "number of Monte Carlo paths");
  verify->add_option("--z-threshold", z_threshold, "largest acceptable |z|");
  verify->add_flag("--self-test", self_test,
                   "corrupt the closed-form rate to confirm the check trips");

  auto* sweep = app.add_subcommand("sweep", "premium sweeps over volatility or duration");
  add_contract_options(sweep);
  std::string kind;
  std::string grid_text;
  sweep->add_option("--kind", kind, "volatility or duration")->required();
  sweep->add_option("--grid", grid_text, "lo:hi:step or comma-separated values");

  auto* settle = app.add_subcommand("settle", "replay settlement along simulated paths");
  add_contract_options(settle);
  bool trend_path = false;
  settle->add_option("--n-paths", cfg.n_paths, "number of simulated paths");
  settle->add_flag("--trend-path", trend_path,
                   "settle along the expected-price curve instead of simulating");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitValidation;
  }

  try {
    check_format(cfg.format);
    require(cfg.precision >= 1 && cfg.precision <= 17, "precision must be in [1, 17]");
    if (fit->parsed()) return cmd_fit(cfg, csv_path, vol_mode);
    if (quote->parsed()) return cmd_quote(cfg);
    if (verify->parsed()) return cmd_verify(cfg, z_threshold, self_test);
    if (sweep->parsed()) return cmd_sweep(cfg, kind, grid_text);
    if (settle->parsed()) return cmd_settle(cfg, trend_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return 0;
}
