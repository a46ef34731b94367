#include "volpol/netmetrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include "volpol/error.hpp"
#include "volpol/stats.hpp"

namespace volpol {

int Partition::count() const {
  return community.empty() ? 0 : *std::max_element(community.begin(), community.end()) + 1;
}

namespace {

double edgeWeight(const SyncEdge& e, bool weighted) { return weighted ? e.rho : 1.0; }

// Symmetric weighted graph used by the Louvain levels. self[i] holds the
// diagonal entry A_ii (twice the internal weight of an aggregated node).
struct LevelGraph {
  std::vector<std::vector<std::pair<int, double>>> adj;
  std::vector<double> self;
  std::vector<double> degree;
  double total = 0;  // 2m

  std::size_t size() const { return adj.size(); }

  void finalize() {
    degree.assign(size(), 0.0);
    total = 0;
    for (std::size_t i = 0; i < size(); ++i) {
      degree[i] = self[i];
      for (const auto& [j, w] : adj[i]) degree[i] += w;
      total += degree[i];
    }
  }
};

LevelGraph levelGraph(const SyncNetwork& net, bool weighted) {
  LevelGraph g;
  g.adj.resize(net.nodes.size());
  g.self.assign(net.nodes.size(), 0.0);
  for (const auto& e : net.edges) {
    const double w = edgeWeight(e, weighted);
    if (w < 0) throw std::invalid_argument("Louvain needs non-negative edge weights");
    g.adj[e.i].emplace_back(static_cast<int>(e.j), w);
    g.adj[e.j].emplace_back(static_cast<int>(e.i), w);
  }
  g.finalize();
  return g;
}

// One level of local moves. Returns true if any node changed community.
bool localMoves(const LevelGraph& g, std::vector<int>& comm, std::uint64_t seed) {
  const std::size_t n = g.size();
  std::vector<double> tot(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) tot[static_cast<std::size_t>(comm[i])] += g.degree[i];

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<double> link(n, 0.0);
  std::vector<int> touched;
  bool moved_any = false;
  const double m2 = g.total;
  for (bool improved = true; improved;) {
    improved = false;
    for (const int i : order) {
      const auto ui = static_cast<std::size_t>(i);
      const int own = comm[ui];
      const double ki = g.degree[ui];
      touched.clear();
      for (const auto& [j, w] : g.adj[ui]) {
        const int c = comm[static_cast<std::size_t>(j)];
        if (link[static_cast<std::size_t>(c)] == 0.0) touched.push_back(c);
        link[static_cast<std::size_t>(c)] += w;
      }
      tot[static_cast<std::size_t>(own)] -= ki;

      auto gain = [&](int c) { return link[static_cast<std::size_t>(c)] - tot[static_cast<std::size_t>(c)] * ki / m2; };
      const double own_gain = gain(own);
      int best = own;
      double best_gain = own_gain;
      for (const int c : touched) {
        const double gc = gain(c);
        if (gc > best_gain + 1e-12 || (std::abs(gc - best_gain) <= 1e-12 && c < best)) {
          best = c;
          best_gain = gc;
        }
      }
      if (best != own && !(best_gain > own_gain + 1e-12)) best = own;

      tot[static_cast<std::size_t>(best)] += ki;
      if (best != own) {
        comm[ui] = best;
        improved = moved_any = true;
      }
      for (const int c : touched) link[static_cast<std::size_t>(c)] = 0.0;
    }
  }
  return moved_any;
}

// Relabels communities 0..k-1 in order of first appearance.
int compact(std::vector<int>& comm) {
  std::map<int, int> relabel;
  for (auto& c : comm) {
    const auto [it, inserted] = relabel.emplace(c, static_cast<int>(relabel.size()));
    c = it->second;
  }
  return static_cast<int>(relabel.size());
}

LevelGraph aggregate(const LevelGraph& g, const std::vector<int>& comm, int count) {
  LevelGraph out;
  const auto k = static_cast<std::size_t>(count);
  out.adj.resize(k);
  out.self.assign(k, 0.0);
  std::vector<std::map<int, double>> acc(k);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto ci = static_cast<std::size_t>(comm[i]);
    out.self[ci] += g.self[i];
    for (const auto& [j, w] : g.adj[i]) {
      const int cj = comm[static_cast<std::size_t>(j)];
      if (static_cast<std::size_t>(cj) == ci)
        out.self[ci] += w;
      else
        acc[ci][cj] += w;
    }
  }
  for (std::size_t c = 0; c < k; ++c) out.adj[c].assign(acc[c].begin(), acc[c].end());
  out.finalize();
  return out;
}

}  // namespace

double modularityOf(const SyncNetwork& net, std::span<const int> community, bool weighted) {
  if (community.size() != net.nodes.size()) throw std::invalid_argument("partition does not cover every node");
  if (std::any_of(community.begin(), community.end(), [](int c) { return c < 0; }))
    throw std::invalid_argument("partition has unassigned nodes");
  std::map<int, double> internal;  // sum of A_ij over ordered pairs inside c
  std::map<int, double> total;     // sum of degrees in c
  double m2 = 0;
  for (const auto& e : net.edges) {
    const double w = edgeWeight(e, weighted);
    const int ci = community[e.i];
    const int cj = community[e.j];
    total[ci] += w;
    total[cj] += w;
    if (ci == cj) internal[ci] += 2 * w;
    m2 += 2 * w;
  }
  if (m2 == 0) return 0.0;
  double q = 0;
  for (const auto& [c, t] : total) q += internal[c] / m2 - (t / m2) * (t / m2);
  return q;
}

Partition louvain(const SyncNetwork& net, const LouvainOptions& options) {
  if (net.nodes.empty()) throw std::invalid_argument("Louvain on an empty network");
  LevelGraph g = levelGraph(net, options.weighted);

  Partition result;
  result.community.resize(net.nodes.size());
  std::iota(result.community.begin(), result.community.end(), 0);
  if (g.total == 0) {
    result.modularity = 0;
    return result;
  }

  for (std::uint64_t level = 0;; ++level) {
    std::vector<int> comm(g.size());
    std::iota(comm.begin(), comm.end(), 0);
    const bool moved = localMoves(g, comm, deriveSeed(options.seed, level));
    if (!moved) break;
    const int count = compact(comm);
    for (auto& c : result.community) c = comm[static_cast<std::size_t>(c)];
    g = aggregate(g, comm, count);
  }
  compact(result.community);
  result.modularity = modularityOf(net, result.community, options.weighted);
  return result;
}

std::vector<int> discretizeAttribute(std::span<const double> values) {
  std::vector<int> out;
  out.reserve(values.size());
  for (const double v : values) {
    if (!(v >= -1.0 && v <= 1.0)) throw std::invalid_argument("attribute value outside [-1, 1]");
    out.push_back(static_cast<int>(std::trunc(v * 100.0)));
  }
  return out;
}

std::vector<int> discretizeOpd(std::span<const double> opd, int cap) {
  std::vector<int> out;
  out.reserve(opd.size());
  for (const double v : opd) {
    if (!(v >= 0)) throw std::invalid_argument("OpD must be non-negative");
    out.push_back(static_cast<int>(std::min(std::trunc(v), static_cast<double>(cap))));
  }
  return out;
}

MixingMatrix mixingMatrix(const SyncNetwork& net, std::span<const int> attribute, bool weighted) {
  if (attribute.size() != net.nodes.size()) throw std::invalid_argument("attribute size differs from node count");
  if (net.edges.empty()) throw DegenerateInput("assortativity needs at least one edge");
  std::map<int, Eigen::Index> slot;
  for (const auto& e : net.edges) {
    slot.emplace(attribute[e.i], 0);
    slot.emplace(attribute[e.j], 0);
  }
  MixingMatrix mm;
  mm.values.resize(static_cast<Eigen::Index>(slot.size()));
  Eigen::Index k = 0;
  for (auto& [value, index] : slot) {
    index = k;
    mm.values(k++) = value;
  }
  mm.e = Eigen::MatrixXd::Zero(k, k);
  for (const auto& e : net.edges) {
    const double w = edgeWeight(e, weighted);
    const auto x = slot[attribute[e.i]];
    const auto y = slot[attribute[e.j]];
    mm.e(x, y) += w;
    mm.e(y, x) += w;
  }
  const double sum = mm.e.sum();
  if (!(sum > 0)) throw DegenerateInput("mixing matrix has no weight");
  mm.e /= sum;
  mm.a = mm.e.rowwise().sum();
  mm.b = mm.e.colwise().sum().transpose();
  return mm;
}

double assortativity(const MixingMatrix& mm) {
  const Eigen::VectorXd& v = mm.values;
  const double mean_a = v.dot(mm.a);
  const double mean_b = v.dot(mm.b);
  const double var_a = v.cwiseAbs2().dot(mm.a) - mean_a * mean_a;
  const double var_b = v.cwiseAbs2().dot(mm.b) - mean_b * mean_b;
  const double scale = std::max(1.0, v.cwiseAbs2().maxCoeff());
  if (var_a <= 1e-12 * scale || var_b <= 1e-12 * scale)
    throw DegenerateInput("assortativity undefined: attribute constant over edge endpoints");
  const double cov = v.dot((mm.e - mm.a * mm.b.transpose()) * v);
  return std::clamp(cov / std::sqrt(var_a * var_b), -1.0, 1.0);
}

double assortativity(const SyncNetwork& net, std::span<const int> attribute, bool weighted) {
  return assortativity(mixingMatrix(net, attribute, weighted));
}

std::vector<SyncEdge> rewireEdges(std::size_t node_count, const std::vector<SyncEdge>& edges, std::size_t swaps,
                                  Rng& rng) {
  if (edges.size() < 2) throw DegenerateInput("rewiring needs at least two edges");
  auto key = [node_count](std::size_t u, std::size_t v) {
    return u < v ? u * node_count + v : v * node_count + u;
  };
  std::vector<SyncEdge> out = edges;
  std::unordered_set<std::size_t> present;
  present.reserve(out.size() * 2);
  for (const auto& e : out) present.insert(key(e.i, e.j));

  std::uniform_int_distribution<std::size_t> pick(0, out.size() - 1);
  std::bernoulli_distribution flip(0.5);
  const std::size_t max_attempts = std::max<std::size_t>(1000, 100 * swaps);
  std::size_t done = 0;
  for (std::size_t attempt = 0; attempt < max_attempts && done < swaps; ++attempt) {
    const std::size_t p = pick(rng);
    const std::size_t q = pick(rng);
    const bool cross = flip(rng);
    if (p == q) continue;
    const std::size_t a = out[p].i, b = out[p].j;
    std::size_t c = out[q].i, d = out[q].j;
    if (cross) std::swap(c, d);
    // (a,b),(c,d) -> (a,d),(c,b)
    if (a == d || c == b) continue;
    if (present.count(key(a, d)) || present.count(key(c, b))) continue;
    present.erase(key(a, b));
    present.erase(key(c, d));
    present.insert(key(a, d));
    present.insert(key(c, b));
    out[p].i = std::min(a, d);
    out[p].j = std::max(a, d);
    out[q].i = std::min(c, b);
    out[q].j = std::max(c, b);
    ++done;
  }
  if (done == 0 && swaps > 0) throw DegenerateInput("no degree-preserving swap is possible on this graph");
  return out;
}

NullStats summarizeReplicas(std::vector<double> values) {
  if (values.empty()) throw DegenerateInput("no defined null replicas");
  std::sort(values.begin(), values.end());
  NullStats s;
  s.replicas = static_cast<int>(values.size());
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  s.ci_low = sortedQuantile(values, 0.025);
  s.ci_high = sortedQuantile(values, 0.975);
  return s;
}

NullStats nullRewire(const SyncNetwork& net, std::span<const int> attribute, const NullOptions& options) {
  if (options.replicas < 1) throw std::invalid_argument("null model needs at least one replica");
  if (net.edges.size() < 2) throw DegenerateInput("rewiring needs at least two edges");
  const auto swaps = static_cast<std::size_t>(std::llround(options.swaps_per_edge * static_cast<double>(net.edges.size())));
  std::vector<double> r(static_cast<std::size_t>(options.replicas));
  parallelFor(r.size(), options.workers, [&](std::size_t k) {
    Rng rng(deriveSeed(options.seed, k));
    SyncNetwork replica;
    replica.nodes = net.nodes;
    replica.edges = rewireEdges(net.nodes.size(), net.edges, swaps, rng);
    r[k] = assortativity(replica, attribute, options.weighted);
  });
  return summarizeReplicas(std::move(r));
}

NullStats nullShuffle(const SyncNetwork& net, std::span<const int> attribute, const NullOptions& options) {
  if (options.replicas < 1) throw std::invalid_argument("null model needs at least one replica");
  if (attribute.size() != net.nodes.size()) throw std::invalid_argument("attribute size differs from node count");
  if (std::adjacent_find(attribute.begin(), attribute.end(), std::not_equal_to<>{}) == attribute.end())
    throw DegenerateInput("attribute shuffle needs at least two distinct values");
  std::vector<std::optional<double>> r(static_cast<std::size_t>(options.replicas));
  parallelFor(r.size(), options.workers, [&](std::size_t k) {
    Rng rng(deriveSeed(options.seed, k));
    std::vector<int> shuffled(attribute.begin(), attribute.end());
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    try {
      r[k] = assortativity(net, shuffled, options.weighted);
    } catch (const DegenerateInput&) {
    }
  });
  std::vector<double> defined;
  for (const auto& v : r)
    if (v) defined.push_back(*v);
  return summarizeReplicas(std::move(defined));
}

SyncNetwork inducedSubnetwork(const SyncNetwork& net, const std::vector<bool>& keep) {
  if (keep.size() != net.nodes.size()) throw std::invalid_argument("mask size differs from node count");
  SyncNetwork out;
  out.ticker = net.ticker;
  out.diagnostics = net.diagnostics;
  std::vector<std::size_t> index(net.nodes.size(), SIZE_MAX);
  for (std::size_t i = 0; i < net.nodes.size(); ++i) {
    if (!keep[i]) continue;
    index[i] = out.nodes.size();
    out.nodes.push_back(net.nodes[i]);
  }
  for (const auto& e : net.edges) {
    if (index[e.i] == SIZE_MAX || index[e.j] == SIZE_MAX) continue;
    SyncEdge copy = e;
    copy.i = index[e.i];
    copy.j = index[e.j];
    out.edges.push_back(copy);
  }
  out.markIsolated();
  return out;
}

}  // namespace volpol
