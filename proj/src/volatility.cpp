#include "volpol/volatility.hpp"

#include <stdexcept>

#include "volpol/error.hpp"
#include "volpol/ingest.hpp"
#include "volpol/stats.hpp"

namespace volpol {

VolatilitySeries highLowVolatility(const QuoteSeries& quotes) {
  validateQuotes(quotes);
  VolatilitySeries out;
  out.ticker = quotes.ticker;
  out.nu.resize(static_cast<Eigen::Index>(quotes.size()));
  for (std::size_t t = 0; t < quotes.size(); ++t)
    out.nu(static_cast<Eigen::Index>(t)) = (quotes.high[t] - quotes.low[t]) / quotes.open[t];
  return out;
}

MesoSeries aggregateActivity(const ActivityMap& series, const TradingCalendar& calendar) {
  MesoSeries out;
  out.ticker = calendar.ticker();
  out.ops = Eigen::ArrayXd::Zero(static_cast<Eigen::Index>(calendar.size()));
  for (const auto& [id, s] : series) out.ops.segment(s.first_day, s.span()) += s.counts;
  return out;
}

namespace {
void requireSameCalendar(const MesoSeries& ops, const VolatilitySeries& nu) {
  if (ops.ops.size() != nu.nu.size()) throw std::invalid_argument("activity and volatility lengths differ");
}
}  // namespace

double mesoLongCorrelation(const MesoSeries& ops, const VolatilitySeries& nu) {
  requireSameCalendar(ops, nu);
  return pearson(ops.ops, nu.nu);
}

Eigen::ArrayXd detrend(const Eigen::ArrayXd& x, int window, MovingAverage kind) {
  if (window < 1) throw std::invalid_argument("moving-average window must be positive");
  const Eigen::Index n = x.size();
  const Eigen::Index w = window;
  if (n < w) return {};
  // Residual k belongs to day t = k + w - 1 (trailing) or k + (w-1)/2 (centered);
  // both average the block x[k .. k+w-1].
  const Eigen::Index offset = kind == MovingAverage::Trailing ? w - 1 : (w - 1) / 2;
  Eigen::ArrayXd out(n - w + 1);
  for (Eigen::Index k = 0; k < out.size(); ++k) out(k) = x(k + offset) - x.segment(k, w).mean();
  return out;
}

double mesoShortCorrelation(const MesoSeries& ops, const VolatilitySeries& nu, int window, MovingAverage kind) {
  requireSameCalendar(ops, nu);
  if (window < 1) throw std::invalid_argument("moving-average window must be positive");
  if (ops.ops.size() < window + 1)
    throw DegenerateInput("series of " + std::to_string(ops.ops.size()) + " days too short for a " +
                          std::to_string(window) + "-day moving average");
  return pearson(detrend(ops.ops, window, kind), detrend(nu.nu, window, kind));
}

}  // namespace volpol
