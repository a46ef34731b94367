// Command-line front end: ingest validation, per-stage analyses, synthetic
// market generation and the full report.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "volpol/error.hpp"
#include "volpol/report.hpp"
#include "volpol/synth.hpp"

namespace fs = std::filesystem;
using namespace volpol;

namespace {

struct InputFlags {
  std::string trades;
  std::vector<std::string> quotes;
  std::vector<std::string> tickers;
  std::string delimiter = ",";
  std::string out_dir = "volpol-out";
};

struct AnalysisFlags {
  AnalysisConfig config;
  std::string auto_filter = "none";
  std::string ma_kind = "trailing";
  std::string shuffle_mode = "both";
  std::string moments = "trading_days";
};

CsvFormat csvFormat(const InputFlags& in) {
  CsvFormat f;
  if (in.delimiter == "\\t" || in.delimiter == "tab")
    f.delimiter = '\t';
  else if (in.delimiter.size() == 1)
    f.delimiter = in.delimiter[0];
  else
    throw ConfigError("delimiter must be a single character");
  return f;
}

void addInputFlags(CLI::App* cmd, InputFlags& in, bool need_trades) {
  auto* t = cmd->add_option("--trades", in.trades, "Trades file (investor_id,date,ticker,shares,price,side[,is_auto])");
  if (need_trades) t->required()->check(CLI::ExistingFile);
  cmd->add_option("--quotes", in.quotes, "Quote file or directory of <TICKER>.csv files; repeatable")
      ->required()
      ->check(CLI::ExistingPath);
  cmd->add_option("--ticker", in.tickers, "Restrict to these tickers; names a single quote file");
  cmd->add_option("--delimiter", in.delimiter, "Field delimiter (single character or 'tab')");
  cmd->add_option("--out-dir", in.out_dir, "Output directory");
}

void addAnalysisFlags(CLI::App* cmd, AnalysisFlags& a) {
  auto& c = a.config;
  cmd->add_option("--min-ops", c.min_ops, "Minimum operations for a network node")->capture_default_str();
  cmd->add_option("--min-days", c.min_days, "Minimum trading days for a polarization score")->capture_default_str();
  cmd->add_option("--shuffles", c.shuffles, "Permutation replicas per pair")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--p-level", c.p_level, "Edge significance level")->capture_default_str()->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--replicas", c.replicas, "Null-model replicas for assortativity")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--polar-replicas", c.polarization_replicas, "Shuffle replicas for the polarization baseline")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--ma-window", c.ma_window, "Moving-average window for the short correlation")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--ma-kind", a.ma_kind, "trailing or centered")->check(CLI::IsMember({"trailing", "centered"}));
  cmd->add_option("--seed", c.seed, "Root seed for every randomized step")->capture_default_str();
  cmd->add_option("--hill-fraction", c.hill_fraction, "Share of the sample used by the Hill estimator")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--bins", c.bins, "Histogram bins over [-1, 1]")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--opd-cap", c.opd_cap, "Cap on the discretized OpD attribute")->capture_default_str();
  cmd->add_option("--auto-filter", a.auto_filter, "none, flag or threshold:<k>")->capture_default_str();
  cmd->add_option("--shuffle-mode", a.shuffle_mode, "Permute both series or only one")
      ->check(CLI::IsMember({"both", "one"}));
  cmd->add_option("--nu-moments", a.moments, "Volatility moments over trading_days or calendar")
      ->check(CLI::IsMember({"trading_days", "calendar"}));
  cmd->add_flag("--weighted-assortativity", c.weighted_assortativity, "Weight the mixing matrix by rho");
}

AnalysisConfig resolveConfig(const AnalysisFlags& a) {
  AnalysisConfig c = a.config;
  c.filter = AutoFilterPolicy::parse(a.auto_filter);
  c.ma_kind = a.ma_kind == "centered" ? MovingAverage::Centered : MovingAverage::Trailing;
  c.shuffle_mode = a.shuffle_mode == "one" ? ShuffleMode::One : ShuffleMode::Both;
  c.moments = a.moments == "calendar" ? VolatilityMoments::Calendar : VolatilityMoments::TradingDays;
  return c;
}

std::vector<QuoteSeries> readQuotes(const InputFlags& in) {
  const auto format = csvFormat(in);
  std::vector<QuoteSeries> all;
  const std::string single = in.tickers.size() == 1 ? in.tickers.front() : std::string{};
  for (const auto& path : in.quotes) {
    auto series = loadQuotes(path, single, format);
    for (auto& q : series) all.push_back(std::move(q));
  }
  if (!in.tickers.empty()) {
    const std::set<std::string> wanted(in.tickers.begin(), in.tickers.end());
    std::erase_if(all, [&](const QuoteSeries& q) { return !wanted.count(q.ticker); });
    if (all.empty()) throw DataError("no quote series matches the requested tickers");
  }
  return all;
}

void writeJson(const fs::path& path, const nlohmann::json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

int runStage(const std::string& name, const InputFlags& in, const AnalysisFlags& flags) {
  const auto config = resolveConfig(flags);
  ReportInputs inputs;
  auto parsed = loadTrades(in.trades, csvFormat(in));
  inputs.trades = std::move(parsed.records);
  inputs.trade_rejects = std::move(parsed.rejects);
  inputs.quotes = readQuotes(in);
  for (const auto& r : inputs.trade_rejects) std::cerr << in.trades << ": " << formatReject(r) << '\n';

  const bool full = name == "report";
  const auto stages = full ? Stages::all() : Stages::only(name);
  const auto report = runAnalysis(inputs, config, stages, in.out_dir);
  validateReport(report, full);
  const fs::path out = fs::path(in.out_dir) / (name + ".json");
  writeJson(out, report);
  std::cout << "wrote " << out.string() << '\n';
  if (!report["failures"].empty()) {
    for (const auto& f : report["failures"])
      std::cerr << "asset " << f["ticker"].get<std::string>() << " failed: " << f["error"].get<std::string>() << '\n';
    return 3;
  }
  return 0;
}

int runValidate(const InputFlags& in) {
  const auto format = csvFormat(in);
  bool clean = true;
  if (!in.trades.empty()) {
    const auto parsed = loadTrades(in.trades, format);
    for (const auto& r : parsed.rejects) std::cout << in.trades << ": " << formatReject(r) << '\n';
    std::cout << in.trades << ": " << parsed.records.size() << " records, " << parsed.rejects.size() << " rejected\n";
    clean = clean && parsed.rejects.empty();
  }
  for (const auto& path : in.quotes) {
    std::vector<fs::path> files;
    if (fs::is_directory(path)) {
      for (const auto& e : fs::directory_iterator(path))
        if (e.path().extension() == ".csv") files.push_back(e.path());
      std::sort(files.begin(), files.end());
    } else {
      files.push_back(path);
    }
    for (const auto& file : files) {
      std::ifstream s(file);
      if (!s) throw DataError("cannot open quotes file " + file.string());
      const auto parsed = parseQuotes(s, file.stem().string(), format);
      for (const auto& r : parsed.rejects) std::cout << file.string() << ": " << formatReject(r) << '\n';
      std::cout << file.string() << ": " << parsed.quotes.size() << " days, " << parsed.rejects.size() << " rejected\n";
      if (parsed.quotes.days.empty()) {
        std::cout << file.string() << ": empty quote series\n";
        clean = false;
      }
      clean = clean && parsed.rejects.empty();
    }
  }
  return clean ? 0 : 1;
}

struct SynthFlags {
  SynthConfig config;
  std::vector<std::string> communities;
  std::string out_dir = "volpol-synth";
};

int runSynth(SynthFlags& flags) {
  for (const auto& arg : flags.communities) {
    PlantedCommunity c;
    const auto colon = arg.find(':');
    try {
      c.size = std::stoi(arg.substr(0, colon));
      if (colon != std::string::npos) c.coupling = std::stod(arg.substr(colon + 1));
    } catch (const std::exception&) {
      throw ConfigError("bad --community '" + arg + "' (expected SIZE[:COUPLING])");
    }
    flags.config.communities.push_back(c);
  }
  const auto market = generate(flags.config);
  writeSynthMarket(market, flags.config, flags.out_dir);
  std::cout << "wrote " << market.trades.size() << " trades over " << market.quotes.size() << " days to "
            << flags.out_dir << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Investor activity, synchronization networks and volatility polarization"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  InputFlags validate_in;
  auto* validate = app.add_subcommand("validate", "Check trades and quote files, listing rejected rows");
  validate->add_option("--trades", validate_in.trades)->check(CLI::ExistingFile);
  validate->add_option("--quotes", validate_in.quotes)->check(CLI::ExistingPath);
  validate->add_option("--delimiter", validate_in.delimiter);

  const std::vector<std::pair<std::string, std::string>> stages = {
      {"activity", "Activity series, CCDFs and Hill tail indexes"},
      {"volatility", "High-Low volatility per day"},
      {"meso", "Mesoscopic activity-volatility correlations (long and short)"},
      {"syncnet", "Synchronization network with permutation-filtered edges"},
      {"metrics", "Louvain modularity and assortativity with null models"},
      {"polarization", "Per-investor volatility polarization and shuffled baseline"},
      {"report", "Full analysis chain and consolidated JSON report"}};
  std::vector<InputFlags> stage_in(stages.size());
  std::vector<AnalysisFlags> stage_flags(stages.size());
  std::vector<CLI::App*> stage_cmds;
  for (std::size_t i = 0; i < stages.size(); ++i) {
    auto* cmd = app.add_subcommand(stages[i].first, stages[i].second);
    addInputFlags(cmd, stage_in[i], true);
    addAnalysisFlags(cmd, stage_flags[i]);
    stage_cmds.push_back(cmd);
  }

  SynthFlags synth_flags;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic market with planted parameters");
  auto& sc = synth_flags.config;
  synth->add_option("--agents", sc.n_agents)->capture_default_str();
  synth->add_option("--days", sc.n_days)->capture_default_str();
  synth->add_option("--seed", sc.seed)->capture_default_str();
  synth->add_option("--ticker", sc.ticker)->capture_default_str();
  synth->add_option("--alpha", sc.activity_tail_alpha, "Pareto tail index of base rates")->capture_default_str();
  synth->add_option("--min-rate", sc.min_rate)->capture_default_str();
  synth->add_option("--max-rate", sc.max_rate)->capture_default_str();
  synth->add_option("--beta-mean", sc.beta_mean)->capture_default_str();
  synth->add_option("--beta-sd", sc.beta_sd)->capture_default_str();
  synth->add_option("--vol-mean", sc.vol.mean, "Mean of log volatility")->capture_default_str();
  synth->add_option("--vol-phi", sc.vol.phi)->capture_default_str();
  synth->add_option("--vol-sigma", sc.vol.sigma)->capture_default_str();
  synth->add_option("--community", synth_flags.communities, "Planted community SIZE[:COUPLING]; repeatable");
  synth->add_option("--gate-p", sc.gate_on_probability)->capture_default_str();
  synth->add_option("--min-active", sc.min_active_fraction)->capture_default_str();
  synth->add_option("--out-dir", synth_flags.out_dir)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) {
      if (validate_in.trades.empty() && validate_in.quotes.empty()) {
        std::cerr << "validate: give --trades and/or --quotes\n";
        return 2;
      }
      return runValidate(validate_in);
    }
    if (synth->parsed()) return runSynth(synth_flags);
    for (std::size_t i = 0; i < stages.size(); ++i)
      if (stage_cmds[i]->parsed()) return runStage(stages[i].first, stage_in[i], stage_flags[i]);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
