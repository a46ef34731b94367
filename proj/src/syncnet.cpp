#include "volpol/syncnet.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "volpol/parallel.hpp"
#include "volpol/stats.hpp"

namespace volpol {

std::optional<OverlapWindow> overlap(const ActivitySeries& a, const ActivitySeries& b) {
  const DayIndex start = std::max(a.first_day, b.first_day);
  const DayIndex end = std::min(a.last_day, b.last_day);
  if (start > end) return std::nullopt;
  return OverlapWindow{start, end};
}

std::optional<double> crossCorrelation(const ActivitySeries& a, const ActivitySeries& b, const OverlapWindow& w) {
  const Eigen::ArrayXd x = a.window(w.start, w.end);
  const Eigen::ArrayXd y = b.window(w.start, w.end);
  if (x.size() < 2 || isConstant(x) || isConstant(y)) return std::nullopt;
  return pearson(x, y);
}

namespace {

// Unbiased integer in [0, range) (Lemire's multiply-shift with rejection).
inline std::uint64_t boundedRand(Rng& rng, std::uint64_t range) {
  __uint128_t m = static_cast<__uint128_t>(rng()) * range;
  auto low = static_cast<std::uint64_t>(m);
  if (low < range) {
    const std::uint64_t floor = (0 - range) % range;
    while (low < floor) {
      m = static_cast<__uint128_t>(rng()) * range;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

struct Sparse {
  std::vector<std::int32_t> pos;
  std::vector<double> val;
};

Sparse sparsify(const Eigen::ArrayXd& x) {
  Sparse s;
  for (Eigen::Index t = 0; t < x.size(); ++t) {
    if (x(t) != 0) {
      s.pos.push_back(static_cast<std::int32_t>(t));
      s.val.push_back(x(t));
    }
  }
  return s;
}

// Places the k nonzeros of a series at uniformly random distinct days: the
// first k steps of a Fisher-Yates shuffle of `slots`, which stays a valid
// permutation between calls.
inline void placeRandomly(std::vector<std::int32_t>& slots, std::size_t k, Rng& rng) {
  const auto n = slots.size();
  for (std::size_t s = 0; s < k; ++s) {
    const auto r = s + static_cast<std::size_t>(boundedRand(rng, n - s));
    std::swap(slots[s], slots[r]);
  }
}

// Smallest exceedance count for which keep becomes false.
int rejectCount(int shuffles, double level) {
  // keep <=> (1 + c) / (shuffles + 1) < level
  int c = 0;
  while (static_cast<double>(1 + c) / static_cast<double>(shuffles + 1) < level) ++c;
  return c;
}

}  // namespace

PermutationResult permutationFilter(const ActivitySeries& a, const ActivitySeries& b, const OverlapWindow& w,
                                    double rho, const PermutationOptions& options) {
  if (options.shuffles < 1) throw std::invalid_argument("permutation filter needs at least one shuffle");
  const Eigen::ArrayXd x = a.window(w.start, w.end);
  const Eigen::ArrayXd y = b.window(w.start, w.end);
  const auto n = static_cast<double>(x.size());
  const auto mx = populationMoments(x);
  const auto my = populationMoments(y);

  // Permutations keep both means and deviations, so rho_shuffled >= rho is
  // equivalent to the raw cross sum exceeding this threshold.
  const double threshold = n * (rho * mx.stddev * my.stddev + mx.mean * my.mean);
  const double tolerance = 1e-9 * std::max(1.0, std::abs(threshold));

  const Sparse sx = sparsify(x);
  const Sparse sy = sparsify(y);
  std::vector<std::int32_t> slots_x(static_cast<std::size_t>(x.size()));
  std::iota(slots_x.begin(), slots_x.end(), 0);
  std::vector<std::int32_t> slots_y = slots_x;
  std::vector<double> placed_y(static_cast<std::size_t>(x.size()), 0.0);
  if (options.mode == ShuffleMode::One)
    for (std::size_t k = 0; k < sy.pos.size(); ++k) placed_y[static_cast<std::size_t>(sy.pos[k])] = sy.val[k];

  Rng rng(options.seed);
  const int stop_at = options.early_stop ? rejectCount(options.shuffles, options.level) : options.shuffles + 1;
  PermutationResult result;
  for (int r = 0; r < options.shuffles; ++r) {
    if (options.mode == ShuffleMode::Both) {
      placeRandomly(slots_y, sy.pos.size(), rng);
      for (std::size_t k = 0; k < sy.pos.size(); ++k) placed_y[static_cast<std::size_t>(slots_y[k])] = sy.val[k];
    }
    placeRandomly(slots_x, sx.pos.size(), rng);
    double cross = 0;
    for (std::size_t k = 0; k < sx.pos.size(); ++k) cross += sx.val[k] * placed_y[static_cast<std::size_t>(slots_x[k])];
    if (options.mode == ShuffleMode::Both)
      for (std::size_t k = 0; k < sy.pos.size(); ++k) placed_y[static_cast<std::size_t>(slots_y[k])] = 0.0;

    ++result.replicas_run;
    if (cross >= threshold - tolerance && ++result.exceedances >= stop_at) break;
  }
  result.pvalue = static_cast<double>(1 + result.exceedances) / static_cast<double>(options.shuffles + 1);
  result.keep = result.pvalue < options.level;
  return result;
}

std::size_t SyncNetwork::isolatedCount() const {
  return static_cast<std::size_t>(std::count_if(nodes.begin(), nodes.end(), [](const auto& n) { return n.isolated; }));
}

void SyncNetwork::markIsolated() {
  for (auto& n : nodes) n.isolated = true;
  for (const auto& e : edges) nodes.at(e.i).isolated = nodes.at(e.j).isolated = false;
}

SyncNetwork buildSyncNetwork(const ActivityMap& series, const SyncOptions& options) {
  SyncNetwork net;
  std::vector<const ActivitySeries*> members;
  for (const auto& [id, s] : series) {
    if (net.ticker.empty()) net.ticker = s.ticker;
    if (s.total_ops < options.min_ops) continue;
    members.push_back(&s);
    net.nodes.push_back({id, s.total_ops, s.active_days, s.span(), s.opd(), std::nullopt, true});
  }
  net.diagnostics.investors = series.size();
  net.diagnostics.nodes = members.size();

  const std::size_t n = members.size();
  struct Row {
    std::vector<SyncEdge> edges;
    SyncDiagnostics diag;
  };
  std::vector<Row> rows(n);
  PermutationOptions perm;
  perm.shuffles = options.shuffles;
  perm.level = options.level;
  perm.mode = options.mode;
  perm.early_stop = options.early_stop;

  parallelFor(n, options.workers, [&](std::size_t i) {
    Row& row = rows[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      ++row.diag.pairs_considered;
      const auto w = overlap(*members[i], *members[j]);
      if (!w) {
        ++row.diag.no_overlap;
        continue;
      }
      if (w->length() < 2) {
        ++row.diag.short_overlap;
        continue;
      }
      const auto rho = crossCorrelation(*members[i], *members[j], *w);
      if (!rho) {
        ++row.diag.degenerate;
        continue;
      }
      ++row.diag.edges_pre_filter;
      PermutationOptions pair_options = perm;
      pair_options.seed = deriveSeed(options.seed, i, j);
      const auto test = permutationFilter(*members[i], *members[j], *w, *rho, pair_options);
      if (test.keep) row.edges.push_back({i, j, *rho, w->length(), test.pvalue});
    }
  });

  for (auto& row : rows) {
    auto& d = net.diagnostics;
    d.pairs_considered += row.diag.pairs_considered;
    d.no_overlap += row.diag.no_overlap;
    d.short_overlap += row.diag.short_overlap;
    d.degenerate += row.diag.degenerate;
    d.edges_pre_filter += row.diag.edges_pre_filter;
    net.edges.insert(net.edges.end(), row.edges.begin(), row.edges.end());
  }
  net.diagnostics.edges_post_filter = net.edges.size();
  net.markIsolated();
  return net;
}

}  // namespace volpol
