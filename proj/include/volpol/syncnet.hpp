#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "volpol/activity.hpp"

namespace volpol {

/// Intersection [start, end] of two investors' active periods.
struct OverlapWindow {
  DayIndex start = 0;
  DayIndex end = 0;
  std::int32_t length() const { return end - start + 1; }
};

std::optional<OverlapWindow> overlap(const ActivitySeries& a, const ActivitySeries& b);

/// Cross-correlation of daily counts over the window, zeros included, with
/// means and population deviations taken over the window. Empty when either
/// series is constant there.
std::optional<double> crossCorrelation(const ActivitySeries& a, const ActivitySeries& b, const OverlapWindow& w);

enum class ShuffleMode {
  Both,  // permute the day order of both series independently
  One    // permute only the first series
};

struct PermutationOptions {
  int shuffles = 999;
  double level = 0.01;
  std::uint64_t seed = 0;
  ShuffleMode mode = ShuffleMode::Both;
  /// Stop as soon as enough replicas reach rho that `keep` can no longer be
  /// true. The keep decision is unchanged; pvalue is then only a lower bound.
  bool early_stop = false;
};

struct PermutationResult {
  double pvalue = 1.0;  // (1 + #{rho_shuffled >= rho}) / (replicas + 1)
  bool keep = false;    // pvalue < level
  int exceedances = 0;
  int replicas_run = 0;
};

/// One-sided shuffle test of rho against day-order permutations of the
/// windowed series. Deterministic given the seed.
PermutationResult permutationFilter(const ActivitySeries& a, const ActivitySeries& b, const OverlapWindow& w,
                                    double rho, const PermutationOptions& options);

struct NetworkNode {
  std::string id;
  std::int64_t total_ops = 0;
  std::int32_t active_days = 0;
  std::int32_t span = 0;
  double opd = 0;
  std::optional<double> rho_ov;
  bool isolated = true;
};

struct SyncEdge {
  std::size_t i = 0;  // node indices, i < j
  std::size_t j = 0;
  double rho = 0;
  std::int32_t overlap = 0;
  double pvalue = 1;
};

struct SyncDiagnostics {
  std::size_t investors = 0;
  std::size_t nodes = 0;
  std::size_t pairs_considered = 0;
  std::size_t no_overlap = 0;
  std::size_t short_overlap = 0;
  std::size_t degenerate = 0;
  std::size_t edges_pre_filter = 0;
  std::size_t edges_post_filter = 0;
};

/// Undirected simple graph over investors. Nodes are ordered by id.
struct SyncNetwork {
  std::string ticker;
  std::vector<NetworkNode> nodes;
  std::vector<SyncEdge> edges;
  SyncDiagnostics diagnostics;

  std::size_t isolatedCount() const;
  /// Recomputes the `isolated` flags from the edge list.
  void markIsolated();
};

struct SyncOptions {
  std::int64_t min_ops = 20;
  int shuffles = 999;
  double level = 0.01;
  std::uint64_t seed = 0;
  ShuffleMode mode = ShuffleMode::Both;
  bool early_stop = true;
  unsigned workers = 0;  // 0: VOLPOL_WORKERS or all cores
};

/// Nodes are investors with at least `min_ops` operations; an edge is kept
/// when the pair's correlation passes the permutation filter. Each pair uses
/// its own RNG stream derived from (seed, i, j), so the result does not
/// depend on the worker count.
SyncNetwork buildSyncNetwork(const ActivityMap& series, const SyncOptions& options);

}  // namespace volpol
