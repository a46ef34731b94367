#include <random>
#include <sstream>

#include "doctest.h"
#include "volpol/error.hpp"
#include "volpol/ingest.hpp"

using namespace volpol;

namespace {
TradeParseResult parse(const std::string& text, const CsvFormat& format = {}) {
  std::istringstream in(text);
  return parseTrades(in, format);
}

QuoteSeries quotes(std::vector<Date> days) {
  QuoteSeries q;
  q.ticker = "REP";
  for (auto d : days) {
    q.days.push_back(d);
    q.open.push_back(10);
    q.high.push_back(11);
    q.low.push_back(9);
  }
  return q;
}
}  // namespace

TEST_CASE("trade row maps field by field") {
  const auto r = parse("investor_id,date,ticker,shares,price,side\nC001,2003-05-12,REP,100,14.25,buy\n");
  REQUIRE(r.records.size() == 1);
  CHECK(r.rejects.empty());
  const auto& t = r.records[0];
  CHECK(t.investor_id == "C001");
  CHECK(t.date == Date::fromYmd(2003, 5, 12));
  CHECK(t.ticker == "REP");
  CHECK(t.shares == 100);
  CHECK(t.price == 14.25);
  CHECK((t.side == Side::Buy));
  CHECK_FALSE(t.is_auto.has_value());
  CHECK_FALSE(r.has_auto_column);
}

TEST_CASE("invalid rows are rejected with line numbers and reasons") {
  const auto r = parse(
      "investor_id,date,ticker,shares,price,side\n"
      "C001,2003-05-12,REP,0,14.25,buy\n"
      "C001,2003-02-30,REP,10,14.25,buy\n"
      "C001,2003-05-12,REP,10,-1,sell\n"
      "C001,2003-05-12,REP,10,1,hold\n"
      "C001,2003-05-12,REP\n");
  CHECK(r.records.empty());
  REQUIRE(r.rejects.size() == 5);
  CHECK(formatReject(r.rejects[0]) == "line 2: non-positive shares");
  CHECK(r.rejects[1].line == 3);
  CHECK(r.rejects[1].reason.find("bad date") == 0);
  CHECK(formatReject(r.rejects[2]) == "line 4: non-positive price");
  CHECK(r.rejects[3].reason.find("bad side") == 0);
  CHECK(r.rejects[4].line == 6);
}

TEST_CASE("1000 valid rows plus 3 malformed give 1000 records and 3 rejects") {
  std::ostringstream text;
  text << "investor_id,date,ticker,shares,price,side\n";
  for (int i = 0; i < 1000; ++i) {
    text << "C" << i % 37 << ",2004-01-" << (i % 28 + 1 < 10 ? "0" : "") << (i % 28 + 1) << ",TEF," << (i + 1)
         << ",12.5,sell\n";
    if (i == 10) text << "C1,2004-01-01,TEF,abc,12.5,sell\n";
    if (i == 500) text << "C1,not-a-date,TEF,1,12.5,sell\n";
    if (i == 900) text << "C1,2004-01-01,TEF,1,0,sell\n";
  }
  const auto r = parse(text.str());
  CHECK(r.records.size() == 1000);
  CHECK(r.rejects.size() == 3);
}

TEST_CASE("missing mandatory column is fatal") {
  CHECK_THROWS_AS(parse("investor_id,date,ticker,shares,side\nC1,2003-01-02,REP,1,buy\n"), DataError);
}

TEST_CASE("configurable delimiter and column names") {
  CsvFormat f;
  f.delimiter = ';';
  f.columns["investor_id"] = "client";
  const auto r = parse("client;date;ticker;shares;price;side\nX9;2001-03-04;SAN;5;9.5;SELL\n", f);
  REQUIRE(r.records.size() == 1);
  CHECK(r.records[0].investor_id == "X9");
  CHECK((r.records[0].side == Side::Sell));
}

TEST_CASE("serialize then parse round-trips bit-exactly") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> price(0.01, 500.0);
  std::uniform_int_distribution<int> day(0, 3000), shares(1, 100000);
  std::vector<TradeRecord> recs;
  for (int i = 0; i < 500; ++i) {
    TradeRecord t;
    t.investor_id = "I" + std::to_string(i % 13);
    t.date = Date(10000 + day(rng));
    t.ticker = i % 2 ? "TEF" : "ZEL";
    t.shares = shares(rng);
    t.price = price(rng);
    t.side = i % 3 ? Side::Buy : Side::Sell;
    t.is_auto = i % 5 == 0;
    recs.push_back(t);
  }
  std::ostringstream first;
  writeTrades(first, recs, {}, true);
  std::istringstream in(first.str());
  const auto back = parseTrades(in);
  CHECK(back.rejects.empty());
  CHECK(back.records == recs);
  std::ostringstream second;
  writeTrades(second, back.records, {}, true);
  CHECK(second.str() == first.str());
}

TEST_CASE("automatic-operation filter policies") {
  std::vector<TradeRecord> trades;
  for (int i = 0; i < 100; ++i) {
    TradeRecord t{"C" + std::to_string(i % 7), Date(12000 + i % 10), "TEF", 1, 10.0, Side::Buy, i % 10 == 0};
    trades.push_back(t);
  }
  SUBCASE("flag drops flagged records") {
    const auto r = filterAutomatic(trades, AutoFilterPolicy::flag());
    CHECK(r.retained.size() == 90);
    for (const auto& t : r.retained) CHECK_FALSE(*t.is_auto);
    CHECK(r.per_asset.at("TEF").fraction() == doctest::Approx(0.9));
  }
  SUBCASE("none is the identity") {
    const auto r = filterAutomatic(trades, AutoFilterPolicy::none());
    CHECK(r.retained == trades);
  }
  SUBCASE("flag without the column is a configuration error") {
    for (auto& t : trades) t.is_auto.reset();
    CHECK_THROWS_AS(filterAutomatic(trades, AutoFilterPolicy::flag()), ConfigError);
  }
}

TEST_CASE("threshold filter drops busy investor-days") {
  std::vector<TradeRecord> trades;
  // Direct enumeration: 50 investors x 4 days x 2 ops = 400 normal ops, plus
  // one investor with 500 ops on a single day.
  for (int i = 0; i < 50; ++i)
    for (int d = 0; d < 4; ++d)
      for (int k = 0; k < 2; ++k) trades.push_back({"N" + std::to_string(i), Date(13000 + d), "SAN", 1, 5.0, Side::Buy, {}});
  for (int k = 0; k < 500; ++k) trades.push_back({"BOT", Date(13001), "SAN", 1, 5.0, Side::Sell, {}});
  trades.push_back({"BOT", Date(13002), "SAN", 1, 5.0, Side::Sell, {}});

  const auto r = filterAutomatic(trades, AutoFilterPolicy::threshold(100));
  CHECK(r.retained.size() == 401);
  CHECK(r.per_asset.at("SAN").input == 901);
  CHECK(r.per_asset.at("SAN").retained == 401);
  CHECK(r.per_asset.at("SAN").fraction() == doctest::Approx(401.0 / 901.0));
  CHECK(AutoFilterPolicy::parse("threshold:100").max_daily_ops == 100);
  CHECK_THROWS_AS(AutoFilterPolicy::parse("sometimes"), ConfigError);
}

TEST_CASE("calendar from quotes") {
  SUBCASE("five days") {
    std::vector<Date> days;
    for (int i = 0; i < 5; ++i) days.push_back(Date(15000 + i));
    const auto cal = buildCalendar(quotes(days));
    CHECK(cal.size() == 5);
    for (int i = 0; i < 5; ++i) CHECK(*cal.index(Date(15000 + i)) == i);
  }
  SUBCASE("2000 days") {
    std::vector<Date> days;
    for (int i = 0; i < 2000; ++i) days.push_back(Date(15000 + i));
    CHECK(*buildCalendar(quotes(days)).index(days.back()) == 1999);
  }
  SUBCASE("off-calendar trade is flagged") {
    const auto cal = buildCalendar(quotes({Date(15000), Date(15001), Date(15003)}));
    std::vector<TradeRecord> trades = {{"A", Date(15001), "REP", 1, 10.0, Side::Buy, {}},
                                       {"A", Date(15002), "REP", 1, 10.0, Side::Buy, {}},
                                       {"B", Date(15001), "TEF", 1, 10.0, Side::Buy, {}}};
    const auto split = splitByCalendar(trades, cal);
    CHECK(split.on_calendar.size() == 1);
    REQUIRE(split.off_calendar.size() == 1);
    CHECK(split.off_calendar[0].date == Date(15002));
  }
  SUBCASE("empty series is fatal") { CHECK_THROWS_AS(buildCalendar(quotes({})), DataError); }
}

TEST_CASE("quote rows violating the price ordering are rejected") {
  std::istringstream in(
      "date,open,high,low,close\n"
      "2003-01-02,10,11,9,10.5\n"
      "2003-01-03,10,9,11,10\n"
      "2003-01-06,12,11,9,10\n"
      "2003-01-02,10,11,9,10\n"
      "2003-01-07,10,10,10,10\n");
  const auto r = parseQuotes(in, "REP");
  CHECK(r.quotes.size() == 2);
  REQUIRE(r.rejects.size() == 3);
  CHECK(formatReject(r.rejects[0]) == "line 3: high < low");
  CHECK(r.rejects[1].reason == "open outside [low, high]");
  CHECK(r.rejects[2].line == 5);
}
