#include "volpol/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <tuple>

#include "volpol/error.hpp"

namespace volpol {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string_view> split(std::string_view line, char delim) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(delim, start);
    if (pos == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      return out;
    }
    out.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
}

bool blank(std::string_view line) { return trim(line).empty(); }

std::optional<std::int64_t> parseInt(std::string_view s) {
  std::int64_t v = 0;
  if (s.empty()) return std::nullopt;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<double> parseDouble(std::string_view s) {
  double v = 0;
  if (s.empty()) return std::nullopt;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<bool> parseBool(std::string_view s) {
  if (s == "1" || s == "true" || s == "TRUE" || s == "True" || s == "yes") return true;
  if (s == "0" || s == "false" || s == "FALSE" || s == "False" || s == "no") return false;
  return std::nullopt;
}

std::string formatDouble(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// Column positions resolved from the header row.
class Header {
 public:
  Header(std::string_view line, const CsvFormat& format) : format_(format) {
    const auto cells = split(line, format.delimiter);
    for (std::size_t i = 0; i < cells.size(); ++i) names_.emplace_back(cells[i]);
  }

  std::optional<std::size_t> find(const std::string& field) const {
    const auto name = format_.headerFor(field);
    const auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - names_.begin());
  }

  std::size_t require(const std::string& field) const {
    if (auto pos = find(field)) return *pos;
    throw DataError("missing mandatory column '" + format_.headerFor(field) + "'");
  }

 private:
  const CsvFormat& format_;
  std::vector<std::string> names_;
};

}  // namespace

std::string CsvFormat::headerFor(const std::string& field) const {
  if (auto it = columns.find(field); it != columns.end()) return it->second;
  return field;
}

std::string formatReject(const Reject& reject) {
  return "line " + std::to_string(reject.line) + ": " + reject.reason;
}

TradeParseResult parseTrades(std::istream& in, const CsvFormat& format) {
  TradeParseResult result;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!blank(line)) break;
  }
  if (blank(line)) throw DataError("trades file has no header row");

  const Header header(line, format);
  const auto c_id = header.require("investor_id");
  const auto c_date = header.require("date");
  const auto c_ticker = header.require("ticker");
  const auto c_shares = header.require("shares");
  const auto c_price = header.require("price");
  const auto c_side = header.require("side");
  const auto c_auto = header.find("is_auto");
  result.has_auto_column = c_auto.has_value();
  const std::size_t width = 1 + std::max({c_id, c_date, c_ticker, c_shares, c_price, c_side, c_auto.value_or(0)});

  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    const auto cells = split(line, format.delimiter);
    auto reject = [&](std::string reason) { result.rejects.push_back({lineno, std::move(reason)}); };
    if (cells.size() < width) {
      reject("expected at least " + std::to_string(width) + " fields, found " + std::to_string(cells.size()));
      continue;
    }
    TradeRecord rec;
    rec.investor_id = std::string(cells[c_id]);
    rec.ticker = std::string(cells[c_ticker]);
    if (rec.investor_id.empty()) {
      reject("empty investor_id");
      continue;
    }
    if (rec.ticker.empty()) {
      reject("empty ticker");
      continue;
    }
    const auto date = Date::parse(cells[c_date]);
    if (!date) {
      reject("bad date '" + std::string(cells[c_date]) + "'");
      continue;
    }
    rec.date = *date;
    const auto shares = parseInt(cells[c_shares]);
    if (!shares) {
      reject("bad shares '" + std::string(cells[c_shares]) + "'");
      continue;
    }
    if (*shares <= 0) {
      reject("non-positive shares");
      continue;
    }
    rec.shares = *shares;
    const auto price = parseDouble(cells[c_price]);
    if (!price) {
      reject("bad price '" + std::string(cells[c_price]) + "'");
      continue;
    }
    if (*price <= 0) {
      reject("non-positive price");
      continue;
    }
    rec.price = *price;
    const auto side = parseSide(cells[c_side]);
    if (!side) {
      reject("bad side '" + std::string(cells[c_side]) + "'");
      continue;
    }
    rec.side = *side;
    if (c_auto) {
      const auto flag = parseBool(cells[*c_auto]);
      if (!flag) {
        reject("bad is_auto '" + std::string(cells[*c_auto]) + "'");
        continue;
      }
      rec.is_auto = *flag;
    }
    result.records.push_back(std::move(rec));
  }
  return result;
}

void writeTrades(std::ostream& out, std::span<const TradeRecord> trades, const CsvFormat& format, bool include_auto) {
  const char d = format.delimiter;
  out << format.headerFor("investor_id") << d << format.headerFor("date") << d << format.headerFor("ticker") << d
      << format.headerFor("shares") << d << format.headerFor("price") << d << format.headerFor("side");
  if (include_auto) out << d << format.headerFor("is_auto");
  out << '\n';
  for (const auto& t : trades) {
    out << t.investor_id << d << t.date.iso() << d << t.ticker << d << t.shares << d << formatDouble(t.price) << d
        << toString(t.side);
    if (include_auto) out << d << (t.is_auto.value_or(false) ? "1" : "0");
    out << '\n';
  }
}

QuoteParseResult parseQuotes(std::istream& in, const std::string& ticker, const CsvFormat& format) {
  QuoteParseResult result;
  result.quotes.ticker = ticker;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!blank(line)) break;
  }
  if (blank(line)) throw DataError("quotes file has no header row");

  const Header header(line, format);
  const auto c_date = header.require("date");
  const auto c_open = header.require("open");
  const auto c_high = header.require("high");
  const auto c_low = header.require("low");
  const std::size_t width = 1 + std::max({c_date, c_open, c_high, c_low});

  auto& q = result.quotes;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    const auto cells = split(line, format.delimiter);
    auto reject = [&](std::string reason) { result.rejects.push_back({lineno, std::move(reason)}); };
    if (cells.size() < width) {
      reject("expected at least " + std::to_string(width) + " fields, found " + std::to_string(cells.size()));
      continue;
    }
    const auto date = Date::parse(cells[c_date]);
    if (!date) {
      reject("bad date '" + std::string(cells[c_date]) + "'");
      continue;
    }
    const auto open = parseDouble(cells[c_open]);
    const auto high = parseDouble(cells[c_high]);
    const auto low = parseDouble(cells[c_low]);
    if (!open || !high || !low) {
      reject("bad price field");
      continue;
    }
    if (*open <= 0 || *high <= 0 || *low <= 0) {
      reject("non-positive price");
      continue;
    }
    if (*high < *low) {
      reject("high < low");
      continue;
    }
    if (*open < *low || *open > *high) {
      reject("open outside [low, high]");
      continue;
    }
    if (!q.days.empty() && !(q.days.back() < *date)) {
      reject("date " + date->iso() + " not after previous day " + q.days.back().iso());
      continue;
    }
    q.days.push_back(*date);
    q.open.push_back(*open);
    q.high.push_back(*high);
    q.low.push_back(*low);
  }
  return result;
}

void writeQuotes(std::ostream& out, const QuoteSeries& quotes, const CsvFormat& format) {
  const char d = format.delimiter;
  out << format.headerFor("date") << d << format.headerFor("open") << d << format.headerFor("high") << d
      << format.headerFor("low") << '\n';
  for (std::size_t i = 0; i < quotes.size(); ++i) {
    out << quotes.days[i].iso() << d << formatDouble(quotes.open[i]) << d << formatDouble(quotes.high[i]) << d
        << formatDouble(quotes.low[i]) << '\n';
  }
}

void validateQuotes(const QuoteSeries& q) {
  const auto n = q.days.size();
  if (q.open.size() != n || q.high.size() != n || q.low.size() != n)
    throw DataError("quote series " + q.ticker + ": column lengths differ");
  for (std::size_t i = 0; i < n; ++i) {
    const std::string where = "quote series " + q.ticker + " day " + q.days[i].iso() + ": ";
    if (!(q.open[i] > 0)) throw DataError(where + "non-positive open");
    if (q.high[i] < q.low[i]) throw DataError(where + "high < low");
    if (q.open[i] < q.low[i] || q.open[i] > q.high[i]) throw DataError(where + "open outside [low, high]");
    if (i > 0 && !(q.days[i - 1] < q.days[i])) throw DataError(where + "days not strictly increasing");
  }
}

AutoFilterPolicy AutoFilterPolicy::parse(const std::string& text) {
  if (text == "none") return none();
  if (text == "flag") return flag();
  const std::string prefix = "threshold:";
  if (text.rfind(prefix, 0) == 0) {
    const auto k = parseInt(std::string_view(text).substr(prefix.size()));
    if (k && *k > 0) return threshold(*k);
  }
  throw ConfigError("unknown automatic-operation policy '" + text + "' (expected none, flag or threshold:<k>)");
}

std::string AutoFilterPolicy::describe() const {
  switch (kind) {
    case Kind::None: return "none";
    case Kind::Flag: return "flag";
    case Kind::Threshold: return "threshold:" + std::to_string(max_daily_ops);
  }
  return "none";
}

FilterResult filterAutomatic(std::span<const TradeRecord> trades, const AutoFilterPolicy& policy) {
  FilterResult result;
  for (const auto& t : trades) ++result.per_asset[t.ticker].input;

  std::vector<bool> keep(trades.size(), true);
  switch (policy.kind) {
    case AutoFilterPolicy::Kind::None:
      break;
    case AutoFilterPolicy::Kind::Flag:
      for (std::size_t i = 0; i < trades.size(); ++i) {
        if (!trades[i].is_auto) throw ConfigError("flag policy requires an is_auto column");
        keep[i] = !*trades[i].is_auto;
      }
      break;
    case AutoFilterPolicy::Kind::Threshold: {
      std::map<std::tuple<std::string_view, std::string_view, std::int32_t>, std::int64_t> daily;
      for (const auto& t : trades) ++daily[{t.investor_id, t.ticker, t.date.days()}];
      for (std::size_t i = 0; i < trades.size(); ++i) {
        const auto& t = trades[i];
        keep[i] = daily[{t.investor_id, t.ticker, t.date.days()}] <= policy.max_daily_ops;
      }
      break;
    }
  }
  for (std::size_t i = 0; i < trades.size(); ++i) {
    if (!keep[i]) continue;
    result.retained.push_back(trades[i]);
    ++result.per_asset[trades[i].ticker].retained;
  }
  return result;
}

TradingCalendar buildCalendar(const QuoteSeries& quotes) {
  if (quotes.days.empty()) throw DataError("quote series " + quotes.ticker + " is empty");
  validateQuotes(quotes);
  return TradingCalendar(quotes.ticker, quotes.days);
}

CalendarSplit splitByCalendar(std::span<const TradeRecord> trades, const TradingCalendar& calendar) {
  CalendarSplit split;
  for (const auto& t : trades) {
    if (t.ticker != calendar.ticker()) continue;
    (calendar.index(t.date) ? split.on_calendar : split.off_calendar).push_back(t);
  }
  return split;
}

}  // namespace volpol
