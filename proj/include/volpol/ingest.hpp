#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "volpol/types.hpp"

namespace volpol {

/// Delimiter and header names. `columns` maps a logical field name
/// (investor_id, date, ticker, shares, price, side, is_auto, open, high, low,
/// close) to the header text used in the file; unmapped fields use their
/// logical name.
struct CsvFormat {
  char delimiter = ',';
  std::map<std::string, std::string> columns;

  std::string headerFor(const std::string& field) const;
};

struct Reject {
  std::size_t line = 0;
  std::string reason;
};

/// "line <n>: <reason>"
std::string formatReject(const Reject& reject);

struct TradeParseResult {
  std::vector<TradeRecord> records;
  std::vector<Reject> rejects;
  bool has_auto_column = false;
};

/// Reads a header row followed by one trade per line. Malformed rows are
/// rejected with their 1-based line number; a missing mandatory column
/// throws DataError.
TradeParseResult parseTrades(std::istream& in, const CsvFormat& format = {});

/// Writes the canonical text form read back by parseTrades.
void writeTrades(std::ostream& out, std::span<const TradeRecord> trades, const CsvFormat& format = {},
                 bool include_auto = false);

struct QuoteParseResult {
  QuoteSeries quotes;
  std::vector<Reject> rejects;
};

QuoteParseResult parseQuotes(std::istream& in, const std::string& ticker, const CsvFormat& format = {});
void writeQuotes(std::ostream& out, const QuoteSeries& quotes, const CsvFormat& format = {});

/// Throws DataError naming the first day that breaks a QuoteSeries invariant.
void validateQuotes(const QuoteSeries& quotes);

struct AutoFilterPolicy {
  enum class Kind { None, Flag, Threshold };
  Kind kind = Kind::None;
  /// Threshold: investor-asset-days with more than this many operations are dropped.
  std::int64_t max_daily_ops = 0;

  static AutoFilterPolicy none() { return {}; }
  static AutoFilterPolicy flag() { return {Kind::Flag, 0}; }
  static AutoFilterPolicy threshold(std::int64_t k) { return {Kind::Threshold, k}; }
  /// "none", "flag" or "threshold:<k>"; throws ConfigError otherwise.
  static AutoFilterPolicy parse(const std::string& text);
  std::string describe() const;
};

struct Retention {
  std::size_t input = 0;
  std::size_t retained = 0;
  double fraction() const { return input == 0 ? 1.0 : static_cast<double>(retained) / static_cast<double>(input); }
};

struct FilterResult {
  std::vector<TradeRecord> retained;
  std::map<std::string, Retention> per_asset;
};

/// Drops automatic operations under the given policy. Flag policy throws
/// ConfigError when any record lacks the is_auto column.
FilterResult filterAutomatic(std::span<const TradeRecord> trades, const AutoFilterPolicy& policy);

/// Throws DataError on an empty or invalid quote series.
TradingCalendar buildCalendar(const QuoteSeries& quotes);

struct CalendarSplit {
  std::vector<TradeRecord> on_calendar;
  std::vector<TradeRecord> off_calendar;
};

/// Keeps the trades of the calendar's asset and separates those dated on
/// non-quote days.
CalendarSplit splitByCalendar(std::span<const TradeRecord> trades, const TradingCalendar& calendar);

}  // namespace volpol
