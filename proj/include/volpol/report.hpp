#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "volpol/activity.hpp"
#include "volpol/ingest.hpp"
#include "volpol/netmetrics.hpp"
#include "volpol/polarization.hpp"
#include "volpol/synth.hpp"
#include "volpol/syncnet.hpp"
#include "volpol/volatility.hpp"

namespace volpol {

inline constexpr int kReportSchemaVersion = 1;
inline constexpr const char* kVersion = "1.0.0";

struct AnalysisConfig {
  std::int64_t min_ops = 20;
  std::int32_t min_days = 20;
  int shuffles = 999;
  double p_level = 0.01;
  int replicas = 1000;
  int polarization_replicas = 100;
  int ma_window = 5;
  MovingAverage ma_kind = MovingAverage::Trailing;
  std::uint64_t seed = 0;
  double hill_fraction = 0.1;
  int bins = 50;
  int opd_cap = 100;
  AutoFilterPolicy filter;
  ShuffleMode shuffle_mode = ShuffleMode::Both;
  VolatilityMoments moments = VolatilityMoments::TradingDays;
  bool weighted_assortativity = false;
  unsigned workers = 0;  // not part of the digest: results do not depend on it

  nlohmann::json toJson() const;
  /// Hex FNV-1a digest of toJson().
  std::string digest() const;
};

/// Which parts of the chain to run; dependencies are pulled in automatically.
struct Stages {
  bool activity = true;
  bool volatility = true;
  bool meso = true;
  bool syncnet = true;
  bool polarization = true;
  bool metrics = true;

  static Stages all() { return {}; }
  static Stages only(const std::string& subcommand);
};

template <typename T>
struct Outcome {
  std::optional<T> value;
  std::string error;
};

struct AssortativityReport {
  std::string attribute;
  double r = 0;
  NullStats null_rewire;
  NullStats null_shuffle;
  std::size_t nodes = 0;
  std::size_t edges = 0;
};

struct AssetAnalysis {
  std::string ticker;
  std::size_t trades_in = 0;
  std::size_t trades_retained = 0;
  std::vector<TradeRecord> off_calendar;
  TradingCalendar calendar;
  ActivityMap activity;

  std::vector<CcdfPoint> ops_ccdf;
  std::vector<CcdfPoint> opd_ccdf;
  Outcome<TailFit> ops_tail;
  Outcome<TailFit> opd_tail;
  std::vector<TailFit> ops_hill_sweep;
  std::vector<TailFit> opd_hill_sweep;
  std::vector<OpsVsDays> ops_vs_days;

  std::optional<VolatilitySeries> volatility;
  std::optional<MesoSeries> meso;
  Outcome<double> meso_long;
  Outcome<double> meso_short;

  std::optional<SyncNetwork> network;
  std::optional<Partition> partition;
  std::string partition_error;
  Outcome<AssortativityReport> assort_rho;
  Outcome<AssortativityReport> assort_opd;

  std::optional<ScoreSet> scores;
  std::optional<Histogram> histogram;
  Outcome<ShuffledBaseline> baseline;
  std::optional<PolarizationSummary> polarization;
};

/// Runs the chain for one asset. `trades` are the filtered trades of all
/// assets; only those matching the quote ticker are used.
AssetAnalysis analyzeAsset(std::span<const TradeRecord> trades, const FilterResult& filter, const QuoteSeries& quotes,
                           const AnalysisConfig& config, const Stages& stages = Stages::all());

nlohmann::json toJson(const AssetAnalysis& analysis, const Stages& stages);
void writeAssetTables(const AssetAnalysis& analysis, const std::filesystem::path& dir);

/// Throws DataError when the report misses a mandatory field. With
/// `full`, every successful asset must carry all analysis sections.
void validateReport(const nlohmann::json& report, bool full = true);

struct ReportInputs {
  std::vector<TradeRecord> trades;
  std::vector<Reject> trade_rejects;
  std::vector<QuoteSeries> quotes;
};

/// Filters, analyzes every asset (concurrently), writes per-asset tables
/// under out_dir/<ticker>/ and returns the report. A failing asset is
/// recorded and does not stop the others.
nlohmann::json runAnalysis(const ReportInputs& inputs, const AnalysisConfig& config, const Stages& stages,
                           const std::filesystem::path& out_dir);

/// Reads a trades file; throws DataError if unreadable or missing columns.
TradeParseResult loadTrades(const std::filesystem::path& path, const CsvFormat& format = {});

/// Reads a quote file (ticker from the file stem unless given) or every
/// *.csv in a directory. Rejected rows make the load fail with DataError.
std::vector<QuoteSeries> loadQuotes(const std::filesystem::path& path, const std::string& ticker = {},
                                    const CsvFormat& format = {});

nlohmann::json truthToJson(const SynthTruth& truth, const SynthConfig& config);

/// Writes trades.csv, quotes/<ticker>.csv and truth.json.
void writeSynthMarket(const SynthMarket& market, const SynthConfig& config, const std::filesystem::path& dir);

}  // namespace volpol
