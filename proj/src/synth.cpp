#include "volpol/synth.hpp"

#include <algorithm>
#include <cstdio>
#include <random>
#include <set>
#include <stdexcept>

#include "volpol/error.hpp"
#include "volpol/netmetrics.hpp"
#include "volpol/parallel.hpp"

namespace volpol {

void SynthConfig::validate() const {
  if (n_agents < 2) throw std::invalid_argument("synth: n_agents must be at least 2");
  if (n_days < 30) throw std::invalid_argument("synth: n_days must be at least 30");
  if (!(activity_tail_alpha > 0)) throw std::invalid_argument("synth: activity_tail_alpha must be positive");
  if (!(min_rate > 0) || !(max_rate >= min_rate)) throw std::invalid_argument("synth: need 0 < min_rate <= max_rate");
  if (!(beta_sd >= 0)) throw std::invalid_argument("synth: beta_sd must be non-negative");
  if (!(vol.phi >= 0 && vol.phi < 1)) throw std::invalid_argument("synth: phi must lie in [0, 1)");
  if (!(vol.sigma > 0)) throw std::invalid_argument("synth: sigma must be positive");
  if (!(gate_on_probability > 0 && gate_on_probability <= 1))
    throw std::invalid_argument("synth: gate_on_probability must lie in (0, 1]");
  if (!(min_active_fraction > 0 && min_active_fraction <= 1))
    throw std::invalid_argument("synth: min_active_fraction must lie in (0, 1]");
  if (!(initial_price > 0) || !(price_step_sd >= 0)) throw std::invalid_argument("synth: invalid price path");
  int planted = 0;
  for (const auto& c : communities) {
    if (c.size < 2) throw std::invalid_argument("synth: planted communities need at least two agents");
    if (!(c.coupling >= 0 && c.coupling <= 1)) throw std::invalid_argument("synth: coupling must lie in [0, 1]");
    planted += c.size;
  }
  if (planted > n_agents) throw std::invalid_argument("synth: planted communities exceed n_agents");
}

namespace {

std::vector<Date> businessDays(Date start, int count) {
  std::vector<Date> days;
  days.reserve(static_cast<std::size_t>(count));
  for (Date d = start; static_cast<int>(days.size()) < count; d = Date(d.days() + 1))
    if (d.weekday() < 5) days.push_back(d);
  return days;
}

std::string agentId(int i, int n) {
  const int width = std::max(5, static_cast<int>(std::to_string(n).size()));
  char buf[32];
  std::snprintf(buf, sizeof buf, "A%0*d", width, i);
  return buf;
}

}  // namespace

SynthMarket generate(const SynthConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);

  SynthMarket out;
  auto& truth = out.truth;
  const auto n_agents = static_cast<std::size_t>(cfg.n_agents);
  const int n_days = cfg.n_days;

  // Agents.
  const int min_len = std::max(1, static_cast<int>(std::ceil(cfg.min_active_fraction * n_days)));
  truth.community.assign(n_agents, -1);
  {
    std::size_t next = 0;
    for (std::size_t c = 0; c < cfg.communities.size(); ++c)
      for (int k = 0; k < cfg.communities[c].size; ++k) truth.community[next++] = static_cast<int>(c);
  }
  for (std::size_t i = 0; i < n_agents; ++i) {
    truth.investor_ids.push_back(agentId(static_cast<int>(i), cfg.n_agents));
    const double u = 1.0 - unit(rng);  // (0, 1]
    truth.base_rate.push_back(std::min(cfg.max_rate, cfg.min_rate * std::pow(u, -1.0 / cfg.activity_tail_alpha)));
    truth.beta.push_back(cfg.beta_mean + cfg.beta_sd * normal(rng));
    const int len = std::uniform_int_distribution<int>(min_len, n_days)(rng);
    const int start = std::uniform_int_distribution<int>(0, n_days - len)(rng);
    truth.active_start.push_back(start);
    truth.active_end.push_back(start + len - 1);
  }

  // Volatility and quotes.
  auto& q = out.quotes;
  q.ticker = cfg.ticker;
  q.days = businessDays(cfg.start, n_days);
  const double stationary_sd = cfg.vol.sigma / std::sqrt(1.0 - cfg.vol.phi * cfg.vol.phi);
  double log_nu = cfg.vol.mean + stationary_sd * normal(rng);
  double open = cfg.initial_price;
  for (int t = 0; t < n_days; ++t) {
    if (t > 0) {
      log_nu = cfg.vol.mean + cfg.vol.phi * (log_nu - cfg.vol.mean) + cfg.vol.sigma * normal(rng);
      open *= std::exp(cfg.price_step_sd * normal(rng));
    }
    const double nu = std::exp(log_nu);
    double up = 0.2 + 0.6 * unit(rng);  // share of the range above the open
    if ((1.0 - up) * nu >= 0.5) up = 1.0 - 0.5 / nu;
    q.open.push_back(open);
    q.high.push_back(open * (1.0 + up * nu));
    q.low.push_back(open * (1.0 - (1.0 - up) * nu));
    truth.nu.push_back((q.high.back() - q.low.back()) / q.open.back());
  }
  double nu_mean = 0, nu_sd = 0;
  for (const double v : truth.nu) nu_mean += v;
  nu_mean /= n_days;
  for (const double v : truth.nu) nu_sd += (v - nu_mean) * (v - nu_mean);
  nu_sd = std::sqrt(nu_sd / n_days);
  if (!(nu_sd > 0)) throw std::invalid_argument("synth: volatility path is constant");

  // Community gates.
  std::vector<std::vector<double>> gate(cfg.communities.size(), std::vector<double>(static_cast<std::size_t>(n_days)));
  for (std::size_t c = 0; c < cfg.communities.size(); ++c) {
    const double p = cfg.gate_on_probability;
    const double coupling = cfg.communities[c].coupling;
    for (auto& g : gate[c]) g = (1.0 - coupling) + coupling * (unit(rng) < p ? 1.0 / p : 0.0);
  }

  // Daily operations.
  double total_intensity = 0;
  std::geometric_distribution<std::int64_t> extra_shares(0.01);
  for (int t = 0; t < n_days; ++t) {
    const double z = (truth.nu[static_cast<std::size_t>(t)] - nu_mean) / nu_sd;
    const auto ut = static_cast<std::size_t>(t);
    for (std::size_t i = 0; i < n_agents; ++i) {
      if (t < truth.active_start[i] || t > truth.active_end[i]) continue;
      double intensity = truth.base_rate[i] * std::max(0.0, 1.0 + truth.beta[i] * z);
      if (truth.community[i] >= 0) intensity *= gate[static_cast<std::size_t>(truth.community[i])][ut];
      total_intensity += intensity;
      if (intensity <= 0) continue;
      const auto ops = std::poisson_distribution<int>(intensity)(rng);
      for (int k = 0; k < ops; ++k) {
        TradeRecord rec;
        rec.investor_id = truth.investor_ids[i];
        rec.date = q.days[ut];
        rec.ticker = cfg.ticker;
        rec.shares = 1 + extra_shares(rng);
        rec.price = q.low[ut] + unit(rng) * (q.high[ut] - q.low[ut]);
        rec.side = unit(rng) < 0.5 ? Side::Buy : Side::Sell;
        out.trades.push_back(std::move(rec));
      }
    }
  }
  if (!(total_intensity > 0)) throw std::invalid_argument("synth: parameters force zero intensity everywhere");
  return out;
}

SyncNetwork plantAssortativeNetwork(std::size_t n_nodes, double target_r, std::span<const int> attribute,
                                    std::uint64_t seed, double mean_degree) {
  if (!(target_r > -1 && target_r < 1)) throw std::invalid_argument("target assortativity must lie in (-1, 1)");
  if (attribute.size() != n_nodes) throw std::invalid_argument("attribute size differs from node count");
  if (std::set<int>(attribute.begin(), attribute.end()).size() < 2)
    throw std::invalid_argument("planting assortativity needs at least two attribute values");
  const auto m = static_cast<std::size_t>(std::llround(mean_degree * static_cast<double>(n_nodes) / 2.0));
  if (n_nodes < 3 || m < 2 || m > n_nodes * (n_nodes - 1) / 2)
    throw std::invalid_argument("cannot place the requested number of edges");

  Rng rng(seed);
  std::uniform_int_distribution<std::size_t> node(0, n_nodes - 1);
  auto key = [n_nodes](std::size_t u, std::size_t v) { return u < v ? u * n_nodes + v : v * n_nodes + u; };
  std::set<std::size_t> present;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  while (edges.size() < m) {
    const auto u = node(rng), v = node(rng);
    if (u == v || !present.insert(key(u, v)).second) continue;
    edges.emplace_back(u, v);
  }

  // Endpoint moments over both orientations of every edge.
  const auto x = [&](std::size_t u) { return static_cast<double>(attribute[u]); };
  double s1 = 0, s2 = 0, sxy = 0;
  auto account = [&](std::size_t u, std::size_t v, double sign) {
    s1 += sign * (x(u) + x(v));
    s2 += sign * (x(u) * x(u) + x(v) * x(v));
    sxy += sign * 2.0 * x(u) * x(v);
  };
  for (const auto& [u, v] : edges) account(u, v, 1.0);
  const double orientations = 2.0 * static_cast<double>(m);
  auto current_r = [&] {
    const double mean = s1 / orientations;
    const double var = s2 / orientations - mean * mean;
    return var > 0 ? (sxy / orientations - mean * mean) / var : 0.0;
  };

  std::uniform_int_distribution<std::size_t> pick(0, m - 1);
  const std::size_t max_attempts = 2000 * m;
  double r = current_r();
  for (std::size_t attempt = 0; attempt < max_attempts && std::abs(r - target_r) > 0.005; ++attempt) {
    const auto e = pick(rng);
    const auto u = node(rng), v = node(rng);
    if (u == v || present.count(key(u, v))) continue;
    const auto [a, b] = edges[e];
    account(a, b, -1.0);
    account(u, v, 1.0);
    const double candidate = current_r();
    if (std::abs(candidate - target_r) < std::abs(r - target_r)) {
      present.erase(key(a, b));
      present.insert(key(u, v));
      edges[e] = {u, v};
      r = candidate;
    } else {
      account(u, v, -1.0);
      account(a, b, 1.0);
    }
  }

  SyncNetwork net;
  net.ticker = "planted";
  for (std::size_t i = 0; i < n_nodes; ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "N%05zu", i);
    net.nodes.push_back({buf, 0, 0, 0, 0.0, std::nullopt, true});
  }
  for (const auto& [u, v] : edges) net.edges.push_back({std::min(u, v), std::max(u, v), 1.0, 0, 0.0});
  std::sort(net.edges.begin(), net.edges.end(),
            [](const SyncEdge& p, const SyncEdge& q) { return std::tie(p.i, p.j) < std::tie(q.i, q.j); });
  net.markIsolated();

  const double achieved = assortativity(net, attribute);
  if (std::abs(achieved - target_r) > 0.02)
    throw DataError("assortativity target " + std::to_string(target_r) + " not reached (got " +
                    std::to_string(achieved) + ")");
  return net;
}

}  // namespace volpol
