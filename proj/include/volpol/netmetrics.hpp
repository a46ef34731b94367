#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <span>
#include <vector>

#include "volpol/parallel.hpp"
#include "volpol/syncnet.hpp"

namespace volpol {

struct Partition {
  std::vector<int> community;  // per node, labels 0..count-1
  double modularity = 0;

  int count() const;
};

/// Weighted modularity (1/2m) sum_ij [w_ij - k_i k_j / 2m] delta(c_i, c_j).
/// Edge weights are rho when `weighted`, 1 otherwise. A graph without edges
/// scores 0. Throws std::invalid_argument when the partition does not cover
/// every node.
double modularityOf(const SyncNetwork& net, std::span<const int> community, bool weighted = true);

struct LouvainOptions {
  std::uint64_t seed = 0;
  bool weighted = true;
};

/// Greedy modularity optimization: local moves in seeded random node order,
/// then community aggregation, repeated until no move improves modularity.
/// Gain ties go to the lowest community id.
Partition louvain(const SyncNetwork& net, const LouvainOptions& options = {});

/// Integer part of value * 100, truncated toward zero. Values must lie in [-1, 1].
std::vector<int> discretizeAttribute(std::span<const double> values);

/// Integer part of OpD, capped at `cap`.
std::vector<int> discretizeOpd(std::span<const double> opd, int cap = 100);

/// Joint distribution of attribute values at the two ends of an edge; each
/// undirected edge contributes both orientations.
struct MixingMatrix {
  Eigen::VectorXd values;  // distinct attribute values, ascending
  Eigen::MatrixXd e;       // e(x, y), sums to 1
  Eigen::VectorXd a;       // row sums
  Eigen::VectorXd b;       // column sums
};

MixingMatrix mixingMatrix(const SyncNetwork& net, std::span<const int> attribute, bool weighted = false);

/// r = sum_xy x y (e_xy - a_x b_y) / (sigma_a sigma_b). Throws
/// DegenerateInput when the attribute is constant over all edge endpoints.
double assortativity(const MixingMatrix& mixing);
double assortativity(const SyncNetwork& net, std::span<const int> attribute, bool weighted = false);

struct NullStats {
  double mean = 0;
  double ci_low = 0;   // 2.5th percentile
  double ci_high = 0;  // 97.5th percentile
  int replicas = 0;
};

struct NullOptions {
  int replicas = 1000;
  std::uint64_t seed = 0;
  double swaps_per_edge = 10;
  bool weighted = false;
  unsigned workers = 0;
};

/// Degree-preserving double-edge swaps; returns the rewired edge list.
/// Throws DegenerateInput if no swap is possible.
std::vector<SyncEdge> rewireEdges(std::size_t node_count, const std::vector<SyncEdge>& edges, std::size_t swaps,
                                  Rng& rng);

/// Assortativity of degree-preserving rewirings with node attributes fixed.
NullStats nullRewire(const SyncNetwork& net, std::span<const int> attribute, const NullOptions& options = {});

/// Assortativity with the topology fixed and the attribute permuted over nodes.
/// Replicas whose shuffled attribute is constant over the edge endpoints are
/// dropped from the statistics.
NullStats nullShuffle(const SyncNetwork& net, std::span<const int> attribute, const NullOptions& options = {});

/// Mean and 2.5/97.5 percentiles of a sample.
NullStats summarizeReplicas(std::vector<double> values);

/// Subnetwork on the nodes with keep[i]; node order preserved.
SyncNetwork inducedSubnetwork(const SyncNetwork& net, const std::vector<bool>& keep);

}  // namespace volpol
