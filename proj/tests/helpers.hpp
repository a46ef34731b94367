#pragma once

#include <string>
#include <utility>
#include <vector>

#include "volpol/activity.hpp"
#include "volpol/syncnet.hpp"

namespace testutil {

/// Activity series whose counts start at `first_day`; leading/trailing zeros are trimmed.
inline volpol::ActivitySeries series(const std::string& id, const std::vector<double>& counts,
                                     volpol::DayIndex first_day = 0) {
  std::size_t lo = 0, hi = counts.size();
  while (lo < hi && counts[lo] == 0) ++lo;
  while (hi > lo && counts[hi - 1] == 0) --hi;
  volpol::ActivitySeries s;
  s.investor_id = id;
  s.ticker = "TST";
  s.first_day = first_day + static_cast<volpol::DayIndex>(lo);
  s.last_day = first_day + static_cast<volpol::DayIndex>(hi) - 1;
  s.counts.resize(static_cast<Eigen::Index>(hi - lo));
  for (std::size_t k = lo; k < hi; ++k) {
    s.counts(static_cast<Eigen::Index>(k - lo)) = counts[k];
    s.total_ops += static_cast<std::int64_t>(counts[k]);
    if (counts[k] > 0) ++s.active_days;
  }
  return s;
}

/// Series covering exactly [first_day, first_day + n) even when the ends are zero.
inline volpol::ActivitySeries rawSeries(const std::string& id, const std::vector<double>& counts,
                                        volpol::DayIndex first_day = 0) {
  volpol::ActivitySeries s;
  s.investor_id = id;
  s.ticker = "TST";
  s.first_day = first_day;
  s.last_day = first_day + static_cast<volpol::DayIndex>(counts.size()) - 1;
  s.counts = Eigen::Map<const Eigen::ArrayXd>(counts.data(), static_cast<Eigen::Index>(counts.size()));
  for (double c : counts) {
    s.total_ops += static_cast<std::int64_t>(c);
    if (c > 0) ++s.active_days;
  }
  return s;
}

using EdgeList = std::vector<std::pair<std::size_t, std::size_t>>;

inline volpol::SyncNetwork network(std::size_t n, const EdgeList& edges, double weight = 1.0) {
  volpol::SyncNetwork net;
  net.ticker = "TST";
  for (std::size_t i = 0; i < n; ++i) net.nodes.push_back({"n" + std::to_string(1000 + i), 0, 0, 0, 0.0, {}, true});
  for (auto [u, v] : edges) net.edges.push_back({std::min(u, v), std::max(u, v), weight, 0, 0.0});
  net.markIsolated();
  return net;
}

inline EdgeList clique(std::size_t offset, std::size_t size) {
  EdgeList e;
  for (std::size_t i = 0; i < size; ++i)
    for (std::size_t j = i + 1; j < size; ++j) e.emplace_back(offset + i, offset + j);
  return e;
}

inline EdgeList edgesOf(const volpol::SyncNetwork& net) {
  EdgeList e;
  for (const auto& x : net.edges) e.emplace_back(x.i, x.j);
  return e;
}

}  // namespace testutil
