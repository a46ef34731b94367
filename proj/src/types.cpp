#include "volpol/types.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <stdexcept>

namespace volpol {

namespace chr = std::chrono;

Date Date::fromYmd(int y, unsigned m, unsigned d) {
  const chr::year_month_day ymd{chr::year{y}, chr::month{m}, chr::day{d}};
  if (!ymd.ok()) throw std::invalid_argument("invalid calendar day");
  return Date(chr::sys_days{ymd}.time_since_epoch().count());
}

std::optional<Date> Date::parse(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  auto field = [&](std::size_t pos, std::size_t len, int& out) {
    const char* first = text.data() + pos;
    const char* last = first + len;
    if (!std::all_of(first, last, [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) return false;
    return std::from_chars(first, last, out).ptr == last;
  };
  int y = 0, m = 0, d = 0;
  if (!field(0, 4, y) || !field(5, 2, m) || !field(8, 2, d)) return std::nullopt;
  const chr::year_month_day ymd{chr::year{y}, chr::month{static_cast<unsigned>(m)}, chr::day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;
  return Date(chr::sys_days{ymd}.time_since_epoch().count());
}

std::string Date::iso() const {
  const chr::year_month_day ymd{chr::sys_days{chr::days{days_}}};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()));
  return buf;
}

int Date::weekday() const {
  const chr::weekday wd{chr::sys_days{chr::days{days_}}};
  return static_cast<int>(wd.iso_encoding()) - 1;
}

std::string_view toString(Side side) { return side == Side::Buy ? "buy" : "sell"; }

std::optional<Side> parseSide(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "buy" || lower == "b") return Side::Buy;
  if (lower == "sell" || lower == "s") return Side::Sell;
  return std::nullopt;
}

TradingCalendar::TradingCalendar(std::string ticker, std::vector<Date> days)
    : ticker_(std::move(ticker)), days_(std::move(days)) {
  index_.reserve(days_.size());
  for (std::size_t i = 0; i < days_.size(); ++i) {
    if (i > 0 && !(days_[i - 1] < days_[i])) throw std::invalid_argument("calendar days must be strictly increasing");
    index_.emplace(days_[i].days(), static_cast<DayIndex>(i));
  }
}

std::optional<DayIndex> TradingCalendar::index(Date d) const {
  if (auto it = index_.find(d.days()); it != index_.end()) return it->second;
  return std::nullopt;
}

}  // namespace volpol
