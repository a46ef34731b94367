#include "volpol/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "volpol/error.hpp"
#include "volpol/parallel.hpp"
#include "volpol/tables.hpp"

namespace volpol {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string movingAverageName(MovingAverage kind) {
  return kind == MovingAverage::Trailing ? "trailing" : "centered";
}

std::string shuffleModeName(ShuffleMode mode) { return mode == ShuffleMode::Both ? "both" : "one"; }

std::string momentsName(VolatilityMoments m) {
  return m == VolatilityMoments::TradingDays ? "trading_days" : "calendar";
}

template <typename Fn>
auto capture(Fn&& fn) -> Outcome<decltype(fn())> {
  Outcome<decltype(fn())> out;
  try {
    out.value = fn();
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  return out;
}

std::size_t hillK(std::size_t n, double fraction) {
  if (n < 2) throw DegenerateInput("tail fit needs at least two investors");
  const auto k = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n)));
  return std::clamp<std::size_t>(k, 1, n - 1);
}

Outcome<TailFit> tailFit(const std::vector<double>& values, double fraction) {
  return capture([&] { return hillIndex(values, hillK(values.size(), fraction)); });
}

json fitJson(const Outcome<TailFit>& fit) {
  if (!fit.value) return {{"error", fit.error}};
  return {{"alpha", fit.value->alpha}, {"stderr", fit.value->std_error}, {"k", fit.value->k}, {"n", fit.value->n}};
}

json nullJson(const NullStats& s) {
  return {{"mean", s.mean}, {"lo", s.ci_low}, {"hi", s.ci_high}, {"replicas", s.replicas}};
}

json assortJson(const Outcome<AssortativityReport>& a, const std::string& attribute) {
  if (!a.value) return {{"attribute", attribute}, {"error", a.error}};
  const auto& v = *a.value;
  return {{"attribute", v.attribute},      {"r", v.r},
          {"null_rewire", nullJson(v.null_rewire)}, {"null_shuffle", nullJson(v.null_shuffle)},
          {"nodes", v.nodes},              {"edges", v.edges}};
}

json valueOrError(const Outcome<double>& v) {
  if (v.value) return *v.value;
  return nullptr;
}

std::uint64_t stageSeed(const AnalysisConfig& config, const std::string& stage, const std::string& ticker) {
  return deriveSeed(config.seed, fnv1a(stage), fnv1a(ticker));
}

AssortativityReport assortativityReport(const SyncNetwork& net, const std::vector<int>& attribute,
                                        const std::string& name, const AnalysisConfig& config) {
  AssortativityReport rep;
  rep.attribute = name;
  rep.nodes = net.nodes.size();
  rep.edges = net.edges.size();
  rep.r = assortativity(net, attribute, config.weighted_assortativity);
  NullOptions opts;
  opts.replicas = config.replicas;
  opts.weighted = config.weighted_assortativity;
  opts.workers = config.workers;
  opts.seed = stageSeed(config, "rewire:" + name, net.ticker);
  rep.null_rewire = nullRewire(net, attribute, opts);
  opts.seed = stageSeed(config, "shuffle:" + name, net.ticker);
  rep.null_shuffle = nullShuffle(net, attribute, opts);
  return rep;
}

void writeFile(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
}

template <typename Fn>
void writeTable(const fs::path& path, Fn&& fn) {
  std::ostringstream s;
  fn(s);
  writeFile(path, s.str());
}

}  // namespace

json AnalysisConfig::toJson() const {
  return {{"min_ops", min_ops},
          {"min_days", min_days},
          {"shuffles", shuffles},
          {"p_level", p_level},
          {"replicas", replicas},
          {"polarization_replicas", polarization_replicas},
          {"ma_window", ma_window},
          {"ma_kind", movingAverageName(ma_kind)},
          {"seed", seed},
          {"hill_fraction", hill_fraction},
          {"bins", bins},
          {"opd_cap", opd_cap},
          {"auto_filter", filter.describe()},
          {"shuffle_mode", shuffleModeName(shuffle_mode)},
          {"volatility_moments", momentsName(moments)},
          {"weighted_assortativity", weighted_assortativity},
          {"discretization", "truncate"}};
}

std::string AnalysisConfig::digest() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(toJson().dump())));
  return buf;
}

Stages Stages::only(const std::string& subcommand) {
  Stages s{false, false, false, false, false, false};
  s.activity = true;
  if (subcommand == "activity") return s;
  if (subcommand == "volatility") {
    s.volatility = true;
    return s;
  }
  if (subcommand == "meso") {
    s.volatility = s.meso = true;
    return s;
  }
  if (subcommand == "syncnet") {
    s.syncnet = true;
    return s;
  }
  if (subcommand == "polarization") {
    s.volatility = s.polarization = true;
    return s;
  }
  if (subcommand == "metrics") {
    s.volatility = s.polarization = s.syncnet = s.metrics = true;
    return s;
  }
  return all();
}

AssetAnalysis analyzeAsset(std::span<const TradeRecord> trades, const FilterResult& filter, const QuoteSeries& quotes,
                           const AnalysisConfig& config, const Stages& stages) {
  AssetAnalysis a;
  a.ticker = quotes.ticker;
  if (auto it = filter.per_asset.find(a.ticker); it != filter.per_asset.end()) {
    a.trades_in = it->second.input;
    a.trades_retained = it->second.retained;
  }
  a.calendar = buildCalendar(quotes);
  auto split = splitByCalendar(trades, a.calendar);
  a.off_calendar = std::move(split.off_calendar);
  a.activity = buildActivity(split.on_calendar, a.calendar);

  std::vector<double> ops, opd;
  for (const auto& [id, s] : a.activity) {
    ops.push_back(static_cast<double>(s.total_ops));
    opd.push_back(s.opd());
  }
  if (!ops.empty()) {
    a.ops_ccdf = ccdf(ops);
    a.opd_ccdf = ccdf(opd);
  }
  a.ops_tail = tailFit(ops, config.hill_fraction);
  a.opd_tail = tailFit(opd, config.hill_fraction);
  const auto grid = hillSweepGrid(ops.size());
  a.ops_hill_sweep = hillSweep(ops, grid);
  a.opd_hill_sweep = hillSweep(opd, grid);
  a.ops_vs_days = opsVsDaysTable(a.activity);

  const bool need_vol = stages.volatility || stages.meso || stages.polarization || stages.metrics;
  if (need_vol) a.volatility = highLowVolatility(quotes);
  if (stages.meso) {
    a.meso = aggregateActivity(a.activity, a.calendar);
    a.meso_long = capture([&] { return mesoLongCorrelation(*a.meso, *a.volatility); });
    a.meso_short = capture([&] { return mesoShortCorrelation(*a.meso, *a.volatility, config.ma_window, config.ma_kind); });
  }

  if (stages.polarization || stages.metrics) {
    PolarizationOptions popts;
    popts.min_days = config.min_days;
    popts.moments = config.moments;
    a.scores = scoreAll(a.activity, *a.volatility, popts);
    if (!a.scores->scores.empty()) {
      a.histogram = populationDistribution(a.scores->scores, config.bins);
      BaselineOptions bopts;
      bopts.replicas = config.polarization_replicas;
      bopts.seed = stageSeed(config, "polarization", a.ticker);
      bopts.workers = config.workers;
      a.baseline = capture([&] { return shuffledBaseline(a.activity, *a.volatility, popts, bopts); });
      if (a.baseline.value) a.polarization = summarize(*a.scores, *a.histogram, *a.baseline.value);
    }
  }

  if (stages.syncnet || stages.metrics) {
    SyncOptions sopts;
    sopts.min_ops = config.min_ops;
    sopts.shuffles = config.shuffles;
    sopts.level = config.p_level;
    sopts.mode = config.shuffle_mode;
    sopts.seed = stageSeed(config, "syncnet", a.ticker);
    sopts.workers = config.workers;
    a.network = buildSyncNetwork(a.activity, sopts);
    a.network->ticker = a.ticker;
    if (a.scores) attachScores(*a.network, a.scores->scores);
  }

  if (stages.metrics) {
    const auto& net = *a.network;
    try {
      a.partition = louvain(net, {stageSeed(config, "louvain", a.ticker), true});
    } catch (const std::exception& e) {
      a.partition_error = e.what();
    }
    a.assort_rho = capture([&] {
      std::vector<bool> scored;
      for (const auto& n : net.nodes) scored.push_back(n.rho_ov.has_value());
      const auto sub = inducedSubnetwork(net, scored);
      std::vector<double> rho;
      for (const auto& n : sub.nodes) rho.push_back(*n.rho_ov);
      return assortativityReport(sub, discretizeAttribute(rho), "rho_ov", config);
    });
    a.assort_opd = capture([&] {
      std::vector<double> values;
      for (const auto& n : net.nodes) values.push_back(n.opd);
      return assortativityReport(net, discretizeOpd(values, config.opd_cap), "opd", config);
    });
  }
  return a;
}

json toJson(const AssetAnalysis& a, const Stages& stages) {
  json j;
  j["ticker"] = a.ticker;
  j["status"] = "ok";
  j["ingest"] = {{"trades_in", a.trades_in},
                 {"trades_retained", a.trades_retained},
                 {"retention", a.trades_in == 0 ? 1.0 : static_cast<double>(a.trades_retained) / a.trades_in},
                 {"off_calendar", a.off_calendar.size()},
                 {"calendar_days", a.calendar.size()}};
  std::int64_t total_ops = 0;
  for (const auto& [id, s] : a.activity) total_ops += s.total_ops;
  j["activity"] = {{"investors", a.activity.size()}, {"operations", total_ops}};
  j["tail_fit"] = fitJson(a.ops_tail);
  j["opd_tail_fit"] = fitJson(a.opd_tail);

  if (stages.meso) {
    j["meso"] = {{"ticker", a.ticker}, {"long", valueOrError(a.meso_long)}, {"short", valueOrError(a.meso_short)}};
    if (!a.meso_long.error.empty()) j["meso"]["long_error"] = a.meso_long.error;
    if (!a.meso_short.error.empty()) j["meso"]["short_error"] = a.meso_short.error;
  }

  if (a.network) {
    const auto& net = *a.network;
    const auto& d = net.diagnostics;
    std::size_t connected = 0;
    std::int64_t connected_ops = 0;
    for (const auto& n : net.nodes) {
      if (n.isolated) continue;
      ++connected;
      connected_ops += n.total_ops;
    }
    json network = {{"nodes", net.nodes.size()},
                    {"edges", net.edges.size()},
                    {"isolated", net.isolatedCount()},
                    {"investors_remaining", connected},
                    {"investors_remaining_fraction",
                     a.activity.empty() ? 0.0 : static_cast<double>(connected) / a.activity.size()},
                    {"operations_remaining", connected_ops},
                    {"operations_remaining_fraction",
                     total_ops == 0 ? 0.0 : static_cast<double>(connected_ops) / static_cast<double>(total_ops)},
                    {"diagnostics",
                     {{"investors", d.investors},
                      {"nodes", d.nodes},
                      {"pairs_considered", d.pairs_considered},
                      {"no_overlap", d.no_overlap},
                      {"short_overlap", d.short_overlap},
                      {"degenerate_pairs", d.degenerate},
                      {"edges_pre_filter", d.edges_pre_filter},
                      {"edges_post_filter", d.edges_post_filter}}}};
    if (stages.metrics) {
      if (a.partition) {
        network["modularity"] = a.partition->modularity;
        network["communities"] = a.partition->count();
      } else {
        network["modularity"] = nullptr;
        network["modularity_error"] = a.partition_error;
      }
    }
    j["network"] = std::move(network);
  }

  if (stages.metrics) {
    j["assortativity"] = {{"rho_ov", assortJson(a.assort_rho, "rho_ov")}, {"opd", assortJson(a.assort_opd, "opd")}};
  }

  if (a.scores) {
    json pol;
    if (a.polarization) {
      const auto& p = *a.polarization;
      pol = {{"mean", p.mean},
             {"variance", p.variance},
             {"mode_bin", p.mode_center},
             {"shuffled_variance", p.shuffled_variance},
             {"shuffled_mean", a.baseline.value->shuffled_mean},
             {"variance_ratio", p.variance_ratio},
             {"replicas", a.baseline.value->replicas}};
    } else {
      pol = {{"mean", nullptr}, {"variance", nullptr}, {"variance_ratio", nullptr}};
      pol["error"] = a.scores->scores.empty() ? std::string("no investor has a polarization score") : a.baseline.error;
    }
    pol["scored"] = a.scores->scores.size();
    pol["excluded"] = a.scores->exclusions.size();
    json reasons = json::object();
    for (const auto& e : a.scores->exclusions) {
      const std::string key(toString(e.reason));
      reasons[key] = reasons.value(key, 0) + 1;
    }
    pol["exclusions"] = std::move(reasons);
    j["polarization"] = std::move(pol);
  }
  return j;
}

void writeAssetTables(const AssetAnalysis& a, const fs::path& dir) {
  fs::create_directories(dir);
  writeTable(dir / "ccdf_ops.tsv", [&](auto& s) { tables::writeCcdf(s, a.ops_ccdf); });
  writeTable(dir / "ccdf_opd.tsv", [&](auto& s) { tables::writeCcdf(s, a.opd_ccdf); });
  writeTable(dir / "hill_ops.tsv", [&](auto& s) { tables::writeHillSweep(s, a.ops_hill_sweep); });
  writeTable(dir / "hill_opd.tsv", [&](auto& s) { tables::writeHillSweep(s, a.opd_hill_sweep); });
  writeTable(dir / "ops_vs_days.tsv", [&](auto& s) { tables::writeOpsVsDays(s, a.ops_vs_days); });
  writeTable(dir / "off_calendar.tsv", [&](auto& s) { tables::writeOffCalendar(s, a.off_calendar); });
  if (a.volatility) {
    const MesoSeries meso = a.meso ? *a.meso : aggregateActivity(a.activity, a.calendar);
    writeTable(dir / "volatility.tsv", [&](auto& s) { tables::writeVolatility(s, a.calendar, *a.volatility, meso); });
  }
  if (a.network) {
    writeTable(dir / "nodes.tsv", [&](auto& s) { tables::writeNodes(s, *a.network); });
    writeTable(dir / "edges.tsv", [&](auto& s) { tables::writeEdges(s, *a.network); });
    const auto& d = a.network->diagnostics;
    const json diag = {{"investors", d.investors},
                       {"nodes", d.nodes},
                       {"pairs_considered", d.pairs_considered},
                       {"no_overlap", d.no_overlap},
                       {"short_overlap", d.short_overlap},
                       {"degenerate_pairs", d.degenerate},
                       {"edges_pre_filter", d.edges_pre_filter},
                       {"edges_post_filter", d.edges_post_filter}};
    writeFile(dir / "diagnostics.json", diag.dump(2) + "\n");
  }
  if (a.partition) writeTable(dir / "partition.tsv", [&](auto& s) { tables::writePartition(s, *a.network, *a.partition); });
  if (a.scores) {
    writeTable(dir / "scores.tsv", [&](auto& s) { tables::writeScores(s, a.scores->scores); });
    writeTable(dir / "exclusions.tsv", [&](auto& s) { tables::writeExclusions(s, a.scores->exclusions); });
  }
  if (a.histogram) writeTable(dir / "histogram.tsv", [&](auto& s) { tables::writeHistogram(s, *a.histogram); });
}

namespace {

void require(const json& j, const std::string& key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw DataError("report schema: missing '" + key + "' in " + where);
}

}  // namespace

void validateReport(const json& report, bool full) {
  require(report, "schema_version", "report");
  if (!report["schema_version"].is_number_integer() || report["schema_version"] != kReportSchemaVersion)
    throw DataError("report schema: unsupported schema_version");
  for (const auto* key : {"tool", "version", "run", "assets", "failures"}) require(report, key, "report");
  const auto& run = report["run"];
  for (const auto* key : {"seed", "config", "config_digest", "defaults"}) require(run, key, "run");
  if (!report["assets"].is_array()) throw DataError("report schema: assets must be an array");
  for (const auto& asset : report["assets"]) {
    require(asset, "ticker", "asset");
    require(asset, "status", "asset");
    const std::string where = "asset " + asset["ticker"].get<std::string>();
    if (asset["status"] != "ok") {
      require(asset, "error", where);
      continue;
    }
    require(asset, "tail_fit", where);
    require(asset, "opd_tail_fit", where);
    if (!full) continue;
    for (const auto* key : {"meso", "network", "assortativity", "polarization"}) require(asset, key, where);
    require(asset["meso"], "long", where + " meso");
    require(asset["meso"], "short", where + " meso");
    for (const auto* key : {"nodes", "edges", "modularity"}) require(asset["network"], key, where + " network");
    require(asset["assortativity"], "rho_ov", where + " assortativity");
    require(asset["assortativity"], "opd", where + " assortativity");
    for (const auto* key : {"mean", "variance", "variance_ratio"})
      require(asset["polarization"], key, where + " polarization");
  }
}

json runAnalysis(const ReportInputs& inputs, const AnalysisConfig& config, const Stages& stages,
                 const fs::path& out_dir) {
  fs::create_directories(out_dir);
  const FilterResult filter = filterAutomatic(inputs.trades, config.filter);

  std::vector<const QuoteSeries*> assets;
  for (const auto& q : inputs.quotes) assets.push_back(&q);
  std::sort(assets.begin(), assets.end(), [](auto* a, auto* b) { return a->ticker < b->ticker; });

  std::vector<json> results(assets.size());
  parallelFor(assets.size(), config.workers, [&](std::size_t k) {
    const auto& quotes = *assets[k];
    try {
      const auto analysis = analyzeAsset(filter.retained, filter, quotes, config, stages);
      writeAssetTables(analysis, out_dir / quotes.ticker);
      results[k] = toJson(analysis, stages);
    } catch (const std::exception& e) {
      results[k] = {{"ticker", quotes.ticker}, {"status", "failed"}, {"error", e.what()}};
    }
  });

  json report;
  report["schema_version"] = kReportSchemaVersion;
  report["tool"] = "volpol";
  report["version"] = kVersion;
  report["run"] = {{"seed", config.seed},
                   {"config", config.toJson()},
                   {"config_digest", config.digest()},
                   {"defaults", AnalysisConfig{}.toJson()},
                   {"trade_rejects", inputs.trade_rejects.size()}};
  report["assets"] = json::array();
  report["failures"] = json::array();
  for (auto& r : results) {
    if (r["status"] != "ok") report["failures"].push_back({{"ticker", r["ticker"]}, {"error", r["error"]}});
    report["assets"].push_back(std::move(r));
  }
  std::vector<std::string> unmatched;
  for (const auto& [ticker, retention] : filter.per_asset) {
    const bool quoted = std::any_of(assets.begin(), assets.end(), [&](auto* q) { return q->ticker == ticker; });
    if (!quoted) unmatched.push_back(ticker);
  }
  report["unquoted_tickers"] = unmatched;
  if (!inputs.trade_rejects.empty())
    writeTable(out_dir / "rejects.txt", [&](auto& s) { tables::writeRejects(s, inputs.trade_rejects); });
  return report;
}

TradeParseResult loadTrades(const fs::path& path, const CsvFormat& format) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open trades file " + path.string());
  return parseTrades(in, format);
}

std::vector<QuoteSeries> loadQuotes(const fs::path& path, const std::string& ticker, const CsvFormat& format) {
  std::vector<fs::path> files;
  if (fs::is_directory(path)) {
    for (const auto& entry : fs::directory_iterator(path))
      if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    if (files.empty()) throw DataError("no .csv quote files in " + path.string());
  } else {
    files.push_back(path);
  }
  std::vector<QuoteSeries> out;
  for (const auto& file : files) {
    std::ifstream in(file);
    if (!in) throw DataError("cannot open quotes file " + file.string());
    const std::string name = ticker.empty() || files.size() > 1 ? file.stem().string() : ticker;
    auto parsed = parseQuotes(in, name, format);
    if (!parsed.rejects.empty())
      throw DataError(file.string() + ": " + formatReject(parsed.rejects.front()) +
                      (parsed.rejects.size() > 1 ? " (+" + std::to_string(parsed.rejects.size() - 1) + " more)" : ""));
    out.push_back(std::move(parsed.quotes));
  }
  return out;
}

json truthToJson(const SynthTruth& truth, const SynthConfig& config) {
  json agents = json::array();
  for (std::size_t i = 0; i < truth.investor_ids.size(); ++i) {
    agents.push_back({{"investor", truth.investor_ids[i]},
                      {"lambda", truth.base_rate[i]},
                      {"beta", truth.beta[i]},
                      {"community", truth.community[i]},
                      {"active_start", truth.active_start[i]},
                      {"active_end", truth.active_end[i]}});
  }
  json communities = json::array();
  for (const auto& c : config.communities) communities.push_back({{"size", c.size}, {"coupling", c.coupling}});
  return {{"ticker", config.ticker},
          {"seed", config.seed},
          {"config",
           {{"n_agents", config.n_agents},
            {"n_days", config.n_days},
            {"activity_tail_alpha", config.activity_tail_alpha},
            {"min_rate", config.min_rate},
            {"max_rate", config.max_rate},
            {"beta_mean", config.beta_mean},
            {"beta_sd", config.beta_sd},
            {"vol_process", {{"ar1", {{"mean", config.vol.mean}, {"phi", config.vol.phi}, {"sigma", config.vol.sigma}}}}},
            {"planted_communities", communities},
            {"gate_on_probability", config.gate_on_probability},
            {"min_active_fraction", config.min_active_fraction}}},
          {"agents", agents},
          {"nu", truth.nu}};
}

void writeSynthMarket(const SynthMarket& market, const SynthConfig& config, const fs::path& dir) {
  fs::create_directories(dir / "quotes");
  writeTable(dir / "trades.csv", [&](auto& s) { writeTrades(s, market.trades); });
  writeTable(dir / "quotes" / (market.quotes.ticker + ".csv"), [&](auto& s) { writeQuotes(s, market.quotes); });
  writeFile(dir / "truth.json", truthToJson(market.truth, config).dump(2) + "\n");
}

}  // namespace volpol
