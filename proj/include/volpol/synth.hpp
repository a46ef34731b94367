#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "volpol/syncnet.hpp"
#include "volpol/types.hpp"

namespace volpol {

/// log nu(t) follows mean + phi (log nu(t-1) - mean) + sigma eps.
struct VolProcess {
  double mean = std::log(0.02);
  double phi = 0.9;
  double sigma = 0.25;
};

/// Agents sharing one daily on/off activity gate. With coupling c the
/// intensity multiplier is (1 - c) + c g(t) / p_on, g(t) ~ Bernoulli(p_on).
struct PlantedCommunity {
  int size = 0;
  double coupling = 1.0;
};

struct SynthConfig {
  int n_agents = 500;
  int n_days = 500;
  double activity_tail_alpha = 1.0;  // Pareto tail index of base rates
  double min_rate = 0.05;            // Pareto scale (operations per day)
  double max_rate = 30.0;            // cap on base rates
  double beta_mean = 0.3;
  double beta_sd = 0.3;
  VolProcess vol;
  std::vector<PlantedCommunity> communities;
  double gate_on_probability = 0.1;
  double min_active_fraction = 0.5;  // active periods span [f, 1] of the calendar
  std::string ticker = "SYN";
  Date start = Date::fromYmd(2000, 1, 3);
  double initial_price = 20.0;
  double price_step_sd = 0.01;
  std::uint64_t seed = 1;

  /// Throws std::invalid_argument on an invalid combination.
  void validate() const;
};

struct SynthTruth {
  std::vector<std::string> investor_ids;
  std::vector<double> base_rate;  // lambda_i
  std::vector<double> beta;
  std::vector<int> community;  // -1 when not in a planted community
  std::vector<DayIndex> active_start;
  std::vector<DayIndex> active_end;
  std::vector<double> nu;  // realized (high - low) / open per day
};

struct SynthMarket {
  std::vector<TradeRecord> trades;
  QuoteSeries quotes;
  SynthTruth truth;
};

/// Agents trade Poisson counts with intensity
/// lambda_i max(0, 1 + beta_i z(t)) x gate, z the standardized volatility.
/// Single sequential RNG stream: the same config gives the same market.
SynthMarket generate(const SynthConfig& config);

/// Random graph rewired edge by edge until its attribute assortativity is
/// within 0.02 of `target_r`. Throws DataError if the target is not reached.
SyncNetwork plantAssortativeNetwork(std::size_t n_nodes, double target_r, std::span<const int> attribute,
                                    std::uint64_t seed, double mean_degree = 6.0);

}  // namespace volpol
