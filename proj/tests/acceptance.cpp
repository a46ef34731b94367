// Acceptance suite: one PASS/FAIL line per criterion. Optional arguments
// select criteria by number; the exit status is non-zero if any fails.

#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "oracles.hpp"
#include "volpol/activity.hpp"
#include "volpol/ingest.hpp"
#include "volpol/netmetrics.hpp"
#include "volpol/parallel.hpp"
#include "volpol/polarization.hpp"
#include "volpol/report.hpp"
#include "volpol/synth.hpp"
#include "volpol/syncnet.hpp"
#include "volpol/volatility.hpp"

using namespace volpol;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::vector<double> poissonCounts(Rng& rng, int n, double lambda) {
  std::poisson_distribution<int> p(lambda);
  std::vector<double> v(static_cast<std::size_t>(n));
  for (auto& x : v) x = p(rng);
  return v;
}

std::vector<double> windowed(const ActivitySeries& s, const OverlapWindow& w) {
  const auto x = s.window(w.start, w.end);
  return {x.data(), x.data() + x.size()};
}

// 1. Cross-correlation against the brute-force definition.
Verdict crossCorrelationOracle() {
  Rng rng(101);
  std::uniform_int_distribution<int> len(10, 500), shift(0, 40);
  std::uniform_real_distribution<double> rate(0.2, 4.0);
  double worst = 0;
  int pairs = 0;
  while (pairs < 1000) {
    const auto a = testutil::rawSeries("a", poissonCounts(rng, len(rng), rate(rng)), shift(rng));
    const auto b = testutil::rawSeries("b", poissonCounts(rng, len(rng), rate(rng)), shift(rng));
    const auto w = overlap(a, b);
    if (!w) continue;
    const auto rho = crossCorrelation(a, b, *w);
    if (!rho) continue;
    worst = std::max(worst, std::abs(*rho - oracle::crossCorrelation(windowed(a, *w), windowed(b, *w))));
    ++pairs;
  }
  return {worst <= 1e-12, fmt("%d pairs, max |diff| = %.2e", pairs, worst)};
}

// 2. Activity-volatility correlation against the brute-force definition.
Verdict polarizationOracle() {
  Rng rng(202);
  std::uniform_int_distribution<int> len(10, 500);
  std::uniform_real_distribution<double> rate(0.1, 3.0);
  std::lognormal_distribution<double> lognu(std::log(0.02), 0.5);
  const int days = 600;
  PolarizationOptions opts;
  opts.min_days = 2;
  double worst = 0;
  int pairs = 0;
  while (pairs < 1000) {
    VolatilitySeries nu{"TST", Eigen::ArrayXd(days)};
    for (auto& x : nu.nu) x = lognu(rng);
    const int n = len(rng);
    const int first = std::uniform_int_distribution<int>(0, days - n)(rng);
    const auto s = testutil::series("i", poissonCounts(rng, n, rate(rng)), first);
    if (s.total_ops == 0) continue;
    const auto out = rhoOv(s, nu, opts);
    const auto* score = std::get_if<PolarizationScore>(&out);
    if (!score) continue;
    const std::vector<double> ops(s.counts.data(), s.counts.data() + s.counts.size());
    const std::vector<double> v(nu.nu.data() + s.first_day, nu.nu.data() + s.last_day + 1);
    worst = std::max(worst, std::abs(score->rho_ov - oracle::rhoOv(ops, v)));
    ++pairs;
  }
  return {worst <= 1e-12, fmt("%d investors, max |diff| = %.2e", pairs, worst)};
}

// 3. Tail index of total operations on a planted Zipf population.
Verdict zipfRecovery() {
  SynthConfig cfg;
  cfg.n_agents = 5000;
  cfg.n_days = 2000;
  cfg.activity_tail_alpha = 1.0;
  cfg.seed = 3;
  const auto market = generate(cfg);
  AnalysisConfig config;
  const auto filter = filterAutomatic(market.trades, config.filter);
  const auto a = analyzeAsset(filter.retained, filter, market.quotes, config, Stages::only("activity"));
  if (!a.ops_tail.value) return {false, "tail fit failed: " + a.ops_tail.error};
  const auto& fit = *a.ops_tail.value;
  return {std::abs(fit.alpha - 1.0) <= 0.1,
          fmt("alpha = %.4f +- %.4f (k = %zu, n = %zu, %zu trades)", fit.alpha, fit.std_error, fit.k, fit.n,
              market.trades.size())};
}

// 4. False-positive rate of the permutation filter on independent pairs.
Verdict falsePositiveRate() {
  const std::size_t pairs = 10000;
  std::vector<char> kept(pairs, 0), defined(pairs, 0);
  parallelFor(pairs, 0, [&](std::size_t k) {
    Rng rng(deriveSeed(404, k));
    const auto a = testutil::rawSeries("a", poissonCounts(rng, 100, 1.0));
    const auto b = testutil::rawSeries("b", poissonCounts(rng, 100, 1.0));
    const OverlapWindow w{0, 99};
    const auto rho = crossCorrelation(a, b, w);
    if (!rho) return;
    PermutationOptions opts;
    opts.shuffles = 999;
    opts.level = 0.01;
    opts.seed = deriveSeed(405, k);
    defined[k] = 1;
    kept[k] = permutationFilter(a, b, w, *rho, opts).keep;
  });
  const double n = static_cast<double>(std::count(defined.begin(), defined.end(), 1));
  const double rate = static_cast<double>(std::count(kept.begin(), kept.end(), 1)) / n;
  return {rate <= 0.015, fmt("retention %.4f over %.0f pairs, %u workers", rate, n, defaultWorkerCount())};
}

// 5. A planted synchronized community is recovered as edges and as a community.
Verdict plantedSynchronization() {
  int failures = 0;
  double worst_edges = 1, worst_grouped = 1;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    SynthConfig cfg;
    cfg.n_agents = 500;
    cfg.n_days = 500;
    cfg.communities = {{20, 1.0}};
    cfg.beta_mean = 0;
    cfg.beta_sd = 0;
    cfg.min_rate = 0.1;
    cfg.min_active_fraction = 1.0;
    cfg.seed = seed;
    const auto market = generate(cfg);
    const auto cal = buildCalendar(market.quotes);
    SyncOptions sopts;
    sopts.seed = seed;
    const auto net = buildSyncNetwork(buildActivity(market.trades, cal), sopts);

    std::vector<std::size_t> planted;
    for (std::size_t i = 0; i < net.nodes.size(); ++i) {
      const auto it = std::find(market.truth.investor_ids.begin(), market.truth.investor_ids.end(), net.nodes[i].id);
      if (market.truth.community[static_cast<std::size_t>(it - market.truth.investor_ids.begin())] == 0)
        planted.push_back(i);
    }
    std::set<std::pair<std::size_t, std::size_t>> edges;
    for (const auto& e : net.edges) edges.insert({e.i, e.j});
    std::size_t hit = 0;
    for (std::size_t x = 0; x < planted.size(); ++x)
      for (std::size_t y = x + 1; y < planted.size(); ++y) hit += edges.count({planted[x], planted[y]});
    const double edge_fraction = static_cast<double>(hit) / 190.0;

    const auto part = louvain(net, {seed, true});
    std::map<int, int> sizes;
    for (auto i : planted) ++sizes[part.community[i]];
    int largest = 0;
    for (const auto& [c, n] : sizes) largest = std::max(largest, n);
    const double grouped = largest / 20.0;

    worst_edges = std::min(worst_edges, edge_fraction);
    worst_grouped = std::min(worst_grouped, grouped);
    if (edge_fraction < 0.9 || grouped < 0.9) ++failures;
  }
  return {failures == 0, fmt("10 seeds, min intra-pair retention %.3f, min share in one community %.3f", worst_edges,
                             worst_grouped)};
}

// 6. Modularity of two disjoint equal cliques.
Verdict modularityExactness() {
  double worst_fixed = 0, worst_louvain = 1;
  for (std::size_t size = 3; size <= 12; ++size) {
    auto edges = testutil::clique(0, size);
    const auto second = testutil::clique(size, size);
    edges.insert(edges.end(), second.begin(), second.end());
    const auto net = testutil::network(2 * size, edges);
    std::vector<int> split(2 * size);
    for (std::size_t i = size; i < 2 * size; ++i) split[i] = 1;
    worst_fixed = std::max(worst_fixed, std::abs(modularityOf(net, split) - 0.5));
    for (std::uint64_t seed = 0; seed < 20; ++seed)
      worst_louvain = std::min(worst_louvain, louvain(net, {seed, true}).modularity);
  }
  return {worst_fixed <= 1e-9 && worst_louvain >= 0.5 - 1e-9,
          fmt("max |Q - 0.5| = %.2e, min Louvain Q = %.12f", worst_fixed, worst_louvain)};
}

// 7. Assortativity fixtures, planted target and null coverage.
Verdict assortativityChecks() {
  auto edges = testutil::clique(0, 6);
  const auto second = testutil::clique(6, 6);
  edges.insert(edges.end(), second.begin(), second.end());
  std::vector<int> mono(12, 10);
  for (std::size_t i = 6; i < 12; ++i) mono[i] = 20;
  const double r_cliques = assortativity(testutil::network(12, edges), mono);

  testutil::EdgeList bip;
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 5; j < 12; ++j) bip.emplace_back(i, j);
  std::vector<int> sides(12, 20);
  std::fill(sides.begin(), sides.begin() + 5, 10);
  const double r_bip = assortativity(testutil::network(12, bip), sides);

  int covered = 0;
  double worst_target = 0;
  for (std::uint64_t run = 0; run < 100; ++run) {
    Rng rng(deriveSeed(707, run));
    std::normal_distribution<double> score(0.1, 0.25);
    std::vector<double> values(100);
    for (auto& v : values) v = std::clamp(score(rng), -1.0, 1.0);
    const auto attr = discretizeAttribute(values);
    const auto net = plantAssortativeNetwork(100, 0.15, attr, deriveSeed(708, run));
    worst_target = std::max(worst_target, std::abs(assortativity(net, attr) - 0.15));
    NullOptions nopts;
    nopts.seed = deriveSeed(709, run);
    const auto rewire = nullRewire(net, attr, nopts);
    const auto shuffle = nullShuffle(net, attr, nopts);
    covered += rewire.ci_low <= 0 && rewire.ci_high >= 0 && shuffle.ci_low <= 0 && shuffle.ci_high >= 0;
  }
  const bool pass = std::abs(r_cliques - 1.0) <= 1e-12 && std::abs(r_bip + 1.0) <= 1e-12 && worst_target <= 0.05 &&
                    covered >= 93;
  return {pass, fmt("cliques r = %.15f, bipartite r = %.15f, planted max |r - 0.15| = %.4f, nulls cover 0 in %d/100",
                    r_cliques, r_bip, worst_target, covered)};
}

PolarizationSummary polarizationRun(double beta_mean, double beta_sd, std::uint64_t seed) {
  SynthConfig cfg;
  cfg.n_agents = 2000;
  cfg.n_days = 500;
  cfg.min_rate = 0.2;
  cfg.beta_mean = beta_mean;
  cfg.beta_sd = beta_sd;
  cfg.seed = seed;
  const auto market = generate(cfg);
  AnalysisConfig config;
  config.seed = seed;
  const auto filter = filterAutomatic(market.trades, config.filter);
  const auto a = analyzeAsset(filter.retained, filter, market.quotes, config, Stages::only("polarization"));
  if (!a.polarization) throw std::runtime_error("polarization stage failed: " + a.baseline.error);
  return *a.polarization;
}

// 8. Sign of the planted polarization and the variance-ratio statistic.
Verdict polarizationSign() {
  int positive = 0, ratio_ok = 0, null_ok = 0;
  double min_ratio = 1e9, null_lo = 1e9, null_hi = -1e9;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto planted = polarizationRun(0.5, 0.3, seed);
    positive += planted.mean > 0;
    ratio_ok += planted.variance_ratio > 1.2;
    min_ratio = std::min(min_ratio, planted.variance_ratio);
    const auto null = polarizationRun(0.0, 0.0, seed + 1000);
    null_ok += null.variance_ratio >= 0.9 && null.variance_ratio <= 1.1;
    null_lo = std::min(null_lo, null.variance_ratio);
    null_hi = std::max(null_hi, null.variance_ratio);
  }
  return {positive == 20 && ratio_ok == 20 && null_ok == 20,
          fmt("mean > 0 in %d/20, min planted ratio %.3f, null ratio in [%.3f, %.3f] (%d/20 inside [0.9, 1.1])",
              positive, min_ratio, null_lo, null_hi, null_ok)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

// 9. Byte-identical report and tables across worker counts.
Verdict determinism() {
  SynthConfig cfg;
  cfg.n_agents = 300;
  cfg.n_days = 300;
  cfg.communities = {{15, 1.0}};
  cfg.seed = 9;
  auto market = generate(cfg);
  ReportInputs inputs{std::move(market.trades), {}, {std::move(market.quotes)}};
  AnalysisConfig config;
  config.seed = 99;
  const auto root = fs::temp_directory_path() / "volpol-acceptance-determinism";
  fs::remove_all(root);
  std::vector<std::string> reports;
  for (unsigned workers : {1u, 4u, 8u}) {
    config.workers = workers;
    const auto dir = root / std::to_string(workers);
    fs::create_directories(dir);
    reports.push_back(runAnalysis(inputs, config, Stages::all(), dir).dump(2));
  }
  int files = 0, mismatched = 0;
  for (const auto& entry : fs::recursive_directory_iterator(root / "1")) {
    if (!entry.is_regular_file()) continue;
    const auto rel = fs::relative(entry.path(), root / "1");
    const auto base = slurp(entry.path());
    for (const char* w : {"4", "8"}) mismatched += slurp(root / w / rel) != base;
    ++files;
  }
  const bool same_json = reports[0] == reports[1] && reports[0] == reports[2];
  fs::remove_all(root);
  return {same_json && mismatched == 0 && files > 0,
          fmt("report JSON %s, %d tables compared, %d mismatches", same_json ? "identical" : "differs", files,
              mismatched)};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Verdict()> run;
  double limit_seconds;  // 0: no runtime bound
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "cross-correlation oracle equivalence", crossCorrelationOracle, 10},
      {2, "activity-volatility oracle equivalence", polarizationOracle, 10},
      {3, "Zipf tail recovery", zipfRecovery, 60},
      {4, "permutation filter false-positive rate", falsePositiveRate, 300},
      {5, "planted synchronization recovery", plantedSynchronization, 0},
      {6, "modularity exactness", modularityExactness, 0},
      {7, "assortativity exactness and nulls", assortativityChecks, 0},
      {8, "polarization sign and variance ratio", polarizationSign, 0},
      {9, "determinism across worker counts", determinism, 0},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failed = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_seconds > 0 && secs > c.limit_seconds) {
      v.pass = false;
      v.detail += fmt("; runtime over %.0f s", c.limit_seconds);
    }
    std::printf("[%s] criterion %d, %s: %s (%.1f s)\n", v.pass ? "PASS" : "FAIL", c.id, c.name, v.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !v.pass;
  }
  return failed == 0 ? 0 : 1;
}
