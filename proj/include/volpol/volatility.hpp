#pragma once

#include <Eigen/Core>

#include <string>

#include "volpol/activity.hpp"
#include "volpol/types.hpp"

namespace volpol {

/// High-Low volatility nu(t) = (high - low) / open on every calendar day.
struct VolatilitySeries {
  std::string ticker;
  Eigen::ArrayXd nu;
};

/// Mesoscopic activity O(t): operations by all studied investors per day.
struct MesoSeries {
  std::string ticker;
  Eigen::ArrayXd ops;
};

VolatilitySeries highLowVolatility(const QuoteSeries& quotes);

MesoSeries aggregateActivity(const ActivityMap& series, const TradingCalendar& calendar);

/// Correlation of O(t) and nu(t) over all calendar days (population
/// normalization). Throws DegenerateInput for constant series.
double mesoLongCorrelation(const MesoSeries& ops, const VolatilitySeries& nu);

enum class MovingAverage { Trailing, Centered };

/// Subtracts a `window`-day moving average. Trailing uses days t-w+1..t;
/// centered uses t-(w-1)/2 .. t+w/2. Returns only the days where the
/// average is defined (n - w + 1 values).
Eigen::ArrayXd detrend(const Eigen::ArrayXd& x, int window, MovingAverage kind = MovingAverage::Trailing);

/// Correlation of moving-average residuals. Needs length >= window + 1.
double mesoShortCorrelation(const MesoSeries& ops, const VolatilitySeries& nu, int window = 5,
                            MovingAverage kind = MovingAverage::Trailing);

}  // namespace volpol
