#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace volpol {

/// Calendar day stored as days since 1970-01-01.
class Date {
 public:
  constexpr Date() = default;
  constexpr explicit Date(std::int32_t days_since_epoch) : days_(days_since_epoch) {}
  static Date fromYmd(int y, unsigned m, unsigned d);

  /// Parses strict ISO-8601 `YYYY-MM-DD`; empty optional on any error.
  static std::optional<Date> parse(std::string_view text);
  std::string iso() const;

  constexpr std::int32_t days() const { return days_; }
  /// 0 = Monday ... 6 = Sunday.
  int weekday() const;

  friend constexpr auto operator<=>(Date, Date) = default;

 private:
  std::int32_t days_ = 0;
};

enum class Side : std::uint8_t { Buy, Sell };

std::string_view toString(Side side);
std::optional<Side> parseSide(std::string_view text);

struct TradeRecord {
  std::string investor_id;
  Date date;
  std::string ticker;
  std::int64_t shares = 0;
  double price = 0.0;
  Side side = Side::Buy;
  std::optional<bool> is_auto;

  friend bool operator==(const TradeRecord&, const TradeRecord&) = default;
};

struct QuoteSeries {
  std::string ticker;
  std::vector<Date> days;
  std::vector<double> open;
  std::vector<double> high;
  std::vector<double> low;

  std::size_t size() const { return days.size(); }
};

/// Ordinal position of a day on an asset's trading calendar.
using DayIndex = std::int32_t;

class TradingCalendar {
 public:
  TradingCalendar() = default;
  TradingCalendar(std::string ticker, std::vector<Date> days);

  const std::string& ticker() const { return ticker_; }
  const std::vector<Date>& days() const { return days_; }
  std::size_t size() const { return days_.size(); }
  std::optional<DayIndex> index(Date d) const;
  Date day(DayIndex i) const { return days_.at(static_cast<std::size_t>(i)); }

 private:
  std::string ticker_;
  std::vector<Date> days_;
  std::unordered_map<std::int32_t, DayIndex> index_;
};

}  // namespace volpol
