#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "volpol/activity.hpp"
#include "volpol/syncnet.hpp"
#include "volpol/volatility.hpp"

namespace volpol {

struct PolarizationScore {
  std::string investor_id;
  double rho_ov = 0;
  std::int32_t days_used = 0;
};

enum class ExclusionReason { TooFewDays, ConstantActivity, ConstantVolatility };

std::string_view toString(ExclusionReason reason);

struct Exclusion {
  std::string investor_id;
  ExclusionReason reason;
  std::int32_t days_used = 0;
};

/// Where the mean and deviation of nu are taken.
enum class VolatilityMoments {
  TradingDays,  // the investor's own trading days (default)
  Calendar      // the whole calendar; the score is then not bounded by 1
};

struct PolarizationOptions {
  std::int32_t min_days = 20;
  VolatilityMoments moments = VolatilityMoments::TradingDays;
};

using ScoreOutcome = std::variant<PolarizationScore, Exclusion>;

/// Correlation between an investor's operation count and same-day
/// volatility, restricted to days with at least one operation.
ScoreOutcome rhoOv(const ActivitySeries& a, const VolatilitySeries& nu, const PolarizationOptions& options = {});

struct ScoreSet {
  std::vector<PolarizationScore> scores;
  std::vector<Exclusion> exclusions;
};

ScoreSet scoreAll(const ActivityMap& series, const VolatilitySeries& nu, const PolarizationOptions& options = {});

struct Histogram {
  std::vector<double> centers;
  std::vector<double> density;  // integrates to 1 over [-1, 1]
  double mean = 0;
  double variance = 0;  // population
  double mode_center = 0;
};

Histogram populationDistribution(const std::vector<PolarizationScore>& scores, int bins = 50);

struct ShuffledBaseline {
  double shuffled_variance = 0;  // mean over replicas of the population variance
  double shuffled_mean = 0;      // mean over replicas of the population mean
  double shuffled_mean_se = 0;   // standard error of shuffled_mean across replicas
  std::vector<double> replica_variances;
  int replicas = 0;
};

struct BaselineOptions {
  int replicas = 100;
  std::uint64_t seed = 0;
  unsigned workers = 0;
};

/// Recomputes every eligible score with nu permuted over each investor's
/// trading days, which removes any activity-volatility alignment.
ShuffledBaseline shuffledBaseline(const ActivityMap& series, const VolatilitySeries& nu,
                                  const PolarizationOptions& options, const BaselineOptions& baseline);

struct PolarizationSummary {
  double mean = 0;
  double variance = 0;
  double mode_center = 0;
  double shuffled_variance = 0;
  double variance_ratio = 0;  // variance / shuffled_variance
  std::size_t scored = 0;
  std::size_t excluded = 0;
};

PolarizationSummary summarize(const ScoreSet& scores, const Histogram& hist, const ShuffledBaseline& baseline);

/// Sets rho_ov on network nodes that have a score; returns how many nodes
/// were left without one.
std::size_t attachScores(SyncNetwork& net, const std::vector<PolarizationScore>& scores);

}  // namespace volpol
