#include "volpol/activity.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "volpol/error.hpp"

namespace volpol {

Eigen::ArrayXd ActivitySeries::window(DayIndex from, DayIndex to) const {
  Eigen::ArrayXd out = Eigen::ArrayXd::Zero(to - from + 1);
  const DayIndex lo = std::max(from, first_day);
  const DayIndex hi = std::min(to, last_day);
  if (lo <= hi) out.segment(lo - from, hi - lo + 1) = counts.segment(lo - first_day, hi - lo + 1);
  return out;
}

ActivityMap buildActivity(std::span<const TradeRecord> trades, const TradingCalendar& calendar) {
  std::map<std::string, std::vector<DayIndex>> days_by_investor;
  for (const auto& t : trades) {
    if (t.ticker != calendar.ticker())
      throw std::invalid_argument("trade for " + t.ticker + " passed to calendar of " + calendar.ticker());
    const auto idx = calendar.index(t.date);
    if (!idx) throw std::invalid_argument("trade dated " + t.date.iso() + " is off the trading calendar");
    days_by_investor[t.investor_id].push_back(*idx);
  }

  ActivityMap out;
  for (auto& [id, days] : days_by_investor) {
    const auto [lo, hi] = std::minmax_element(days.begin(), days.end());
    ActivitySeries s;
    s.investor_id = id;
    s.ticker = calendar.ticker();
    s.first_day = *lo;
    s.last_day = *hi;
    s.counts = Eigen::ArrayXd::Zero(s.span());
    for (DayIndex d : days) s.counts(d - s.first_day) += 1.0;
    s.total_ops = static_cast<std::int64_t>(days.size());
    s.active_days = static_cast<std::int32_t>((s.counts > 0).count());
    out.emplace(id, std::move(s));
  }
  return out;
}

std::vector<CcdfPoint> ccdf(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("ccdf of an empty sample");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  std::vector<CcdfPoint> out;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    out.push_back({sorted[i], static_cast<double>(sorted.size() - i) / n});
    i = j;
  }
  return out;
}

TailFit hillIndex(std::span<const double> values, std::size_t k) {
  const std::size_t n = values.size();
  if (k == 0 || k >= n) throw std::invalid_argument("Hill estimator needs 0 < k < n");
  if (std::any_of(values.begin(), values.end(), [](double v) { return !(v > 0); }))
    throw std::invalid_argument("Hill estimator needs positive values");

  std::vector<double> desc(values.begin(), values.end());
  std::partial_sort(desc.begin(), desc.begin() + static_cast<std::ptrdiff_t>(k + 1), desc.end(), std::greater<>{});
  const double threshold = desc[k];
  if (desc[0] == threshold) throw DegenerateInput("Hill estimator: zero log-spacing above the threshold");

  double sum = 0;
  for (std::size_t j = 0; j < k; ++j) sum += std::log(desc[j] / threshold);
  TailFit fit;
  fit.k = k;
  fit.n = n;
  fit.alpha = static_cast<double>(k) / sum;
  fit.std_error = fit.alpha / std::sqrt(static_cast<double>(k));
  return fit;
}

std::size_t defaultHillK(std::size_t n) {
  if (n < 2) throw std::invalid_argument("Hill estimator needs at least two observations");
  const auto k = static_cast<std::size_t>(std::ceil(0.1 * static_cast<double>(n)));
  return std::clamp<std::size_t>(k, 1, n - 1);
}

std::vector<TailFit> hillSweep(std::span<const double> values, std::span<const std::size_t> ks) {
  std::vector<TailFit> out;
  for (const auto k : ks) {
    try {
      out.push_back(hillIndex(values, k));
    } catch (const std::exception&) {
    }
  }
  return out;
}

std::vector<std::size_t> hillSweepGrid(std::size_t n, std::size_t points) {
  std::vector<std::size_t> ks;
  const double lo = 10.0;
  const double hi = static_cast<double>(n) / 2.0;
  if (hi <= lo || points < 2) return ks;
  for (std::size_t i = 0; i < points; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(points - 1);
    const auto k = static_cast<std::size_t>(std::round(lo * std::pow(hi / lo, t)));
    if (ks.empty() || ks.back() != k) ks.push_back(k);
  }
  return ks;
}

std::vector<OpsVsDays> opsVsDaysTable(const ActivityMap& series) {
  std::vector<OpsVsDays> out;
  out.reserve(series.size());
  for (const auto& [id, s] : series) out.push_back({id, s.active_days, s.total_ops});
  return out;
}

}  // namespace volpol
