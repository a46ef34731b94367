#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "volpol/types.hpp"

namespace volpol {

/// Daily operation counts of one investor on one asset, stored densely over
/// the active span [first_day, last_day] of the asset calendar.
struct ActivitySeries {
  std::string investor_id;
  std::string ticker;
  DayIndex first_day = 0;
  DayIndex last_day = 0;
  Eigen::ArrayXd counts;  // counts(k) = operations on day first_day + k
  std::int64_t total_ops = 0;
  std::int32_t active_days = 0;  // N: days with at least one operation

  /// T: trading days from first to last operation, inclusive.
  std::int32_t span() const { return last_day - first_day + 1; }
  /// Operations per trading day, total_ops / N.
  double opd() const { return static_cast<double>(total_ops) / static_cast<double>(active_days); }
  double at(DayIndex day) const {
    return day < first_day || day > last_day ? 0.0 : counts(day - first_day);
  }
  /// Counts over [from, to], zeros outside the active span.
  Eigen::ArrayXd window(DayIndex from, DayIndex to) const;
};

using ActivityMap = std::map<std::string, ActivitySeries>;

/// Builds one series per investor. Trades must belong to the calendar's
/// asset and fall on calendar days (std::invalid_argument otherwise).
ActivityMap buildActivity(std::span<const TradeRecord> trades, const TradingCalendar& calendar);

struct CcdfPoint {
  double value;
  double fraction;  // share of observations >= value
};

/// Empirical survival function at the distinct observed values.
std::vector<CcdfPoint> ccdf(std::span<const double> values);

struct TailFit {
  double alpha = 0;
  double std_error = 0;  // alpha / sqrt(k)
  std::size_t k = 0;
  std::size_t n = 0;
};

/// Hill estimator from the k largest observations:
/// alpha = k / sum_{j<=k} ln(x_(j) / x_(k+1)).
TailFit hillIndex(std::span<const double> values, std::size_t k);

/// ceil(0.1 n), kept within [1, n-1].
std::size_t defaultHillK(std::size_t n);

/// Hill estimates over a set of k values; entries that are invalid for the
/// sample are skipped.
std::vector<TailFit> hillSweep(std::span<const double> values, std::span<const std::size_t> ks);

/// Log-spaced k grid from 10 to n/2 for Hill-plot inspection.
std::vector<std::size_t> hillSweepGrid(std::size_t n, std::size_t points = 20);

struct OpsVsDays {
  std::string investor_id;
  std::int32_t active_days;
  std::int64_t total_ops;
};

std::vector<OpsVsDays> opsVsDaysTable(const ActivityMap& series);

}  // namespace volpol
