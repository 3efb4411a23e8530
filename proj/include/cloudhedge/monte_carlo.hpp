#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <thread>
#include <vector>

#include "cloudhedge/common.hpp"
#include "cloudhedge/pricing.hpp"
#include "cloudhedge/rng.hpp"

namespace cloudhedge::mc {

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  long n_paths = 0;
  std::uint64_t seed = 0;
};

namespace detail {

// Streaming mean/variance (Welford), merged across partitions with Chan's
// formula. Merging in fixed partition order keeps estimates bit-identical
// regardless of how many worker threads ran.
struct RunningMoments {
  long count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++count;
    const double delta = x - mean;
    mean += delta / double(count);
    m2 += delta * (x - mean);
  }

  void merge(const RunningMoments& other) {
    if (other.count == 0) return;
    if (count == 0) {
      *this = other;
      return;
    }
    const double delta = other.mean - mean;
    const long total = count + other.count;
    mean += delta * double(other.count) / double(total);
    m2 += other.m2 + delta * delta * double(count) * double(other.count) / double(total);
    count = total;
  }
};

// Paths are split over a fixed number of partitions; partition p draws from
// substream (seed, p). The partition count is a constant, not the hardware
// thread count, so the estimate depends only on (spec, n_paths, seed).
inline constexpr int kPartitions = 32;

template <typename PathFn>
McEstimate run_partitioned(long n_paths, std::uint64_t seed, PathFn&& path_value) {
  std::vector<RunningMoments> partials(kPartitions);

  const unsigned hw = std::thread::hardware_concurrency();
  const int n_workers = static_cast<int>(std::clamp(hw, 1u, unsigned(kPartitions)));

  auto worker = [&](int worker_id) {
    for (int p = worker_id; p < kPartitions; p += n_workers) {
      const long base = n_paths / kPartitions;
      const long extra = (p < n_paths % kPartitions) ? 1 : 0;
      const long count = base + extra;
      rng::NormalStream normals(seed, static_cast<std::uint64_t>(p));
      RunningMoments moments;
      for (long k = 0; k < count; ++k) moments.add(path_value(normals));
      partials[p] = moments;
    }
  };

  if (n_workers == 1) {
    worker(0);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(n_workers);
    for (int w = 0; w < n_workers; ++w) threads.emplace_back(worker, w);
    for (auto& t : threads) t.join();
  }

  RunningMoments combined;
  for (const auto& partial : partials) combined.merge(partial);

  McEstimate estimate;
  estimate.mean = combined.mean;
  // Unbiased sample variance; clamp guards the degenerate all-equal case.
  const double variance = std::max(combined.m2, 0.0) / double(combined.count - 1);
  estimate.std_error = std::sqrt(variance / double(combined.count));
  estimate.n_paths = n_paths;
  estimate.seed = seed;
  return estimate;
}

}  // namespace detail

// Discounted payoff of the single period-i claim under risk-neutral GBM.
// A single maturity needs no time-stepping: the terminal price is sampled
// from its exact lognormal law.
inline McEstimate mc_period_price(const pricing::ContractSpec& spec, int i, long n_paths,
                                  std::uint64_t seed) {
  spec.validate();
  require(i >= 1 && i <= spec.n_periods, "mc_period_price: period index out of range");
  require(n_paths >= 100, "mc_period_price: n_paths must be at least 100");

  const double t = spec.period_time(i);
  const double rate = spec.contract_rate();
  const double strike = spec.s0 * std::exp(-spec.beta * t);
  const double discount = std::exp(-rate * t);
  const double drift = (rate - 0.5 * spec.sigma * spec.sigma) * t;
  const double diffusion = spec.sigma * std::sqrt(t);
  const double s0 = spec.s0;

  return detail::run_partitioned(n_paths, seed, [=](rng::NormalStream& normals) {
    const double terminal = s0 * std::exp(drift + diffusion * normals.next_normal());
    return discount * std::max(terminal - strike, 0.0);
  });
}

// Discounted claim total over the full settlement grid. Each path walks the
// monthly grid so the estimate captures the correlation between periods; the
// standard error comes from per-path totals.
inline McEstimate mc_contract_price(const pricing::ContractSpec& spec, long n_paths,
                                    std::uint64_t seed) {
  spec.validate();
  require(n_paths >= 100, "mc_contract_price: n_paths must be at least 100");

  const int n = spec.n_periods;
  const double rate = spec.contract_rate();
  const double dt = spec.period_length;
  const double step_drift = (rate - 0.5 * spec.sigma * spec.sigma) * dt;
  const double step_diffusion = spec.sigma * std::sqrt(dt);

  std::vector<double> strikes(n), discounts(n);
  for (int i = 1; i <= n; ++i) {
    const double t = spec.period_time(i);
    strikes[i - 1] = spec.s0 * std::exp(-spec.beta * t);
    discounts[i - 1] = std::exp(-rate * t);
  }
  const double log_s0 = std::log(spec.s0);

  return detail::run_partitioned(n_paths, seed, [=](rng::NormalStream& normals) {
    double log_price = log_s0;
    double total = 0.0;
    for (int k = 0; k < n; ++k) {
      log_price += step_drift + step_diffusion * normals.next_normal();
      const double payout = std::max(std::exp(log_price) - strikes[k], 0.0);
      total += discounts[k] * payout;
    }
    return total;
  });
}

}  // namespace cloudhedge::mc
