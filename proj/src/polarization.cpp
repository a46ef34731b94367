#include "volpol/polarization.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "volpol/error.hpp"
#include "volpol/parallel.hpp"
#include "volpol/stats.hpp"

namespace volpol {

std::string_view toString(ExclusionReason reason) {
  switch (reason) {
    case ExclusionReason::TooFewDays: return "too_few_trading_days";
    case ExclusionReason::ConstantActivity: return "constant_activity";
    case ExclusionReason::ConstantVolatility: return "constant_volatility";
  }
  return "unknown";
}

namespace {

struct TradingDays {
  Eigen::ArrayXd ops;
  Eigen::ArrayXd nu;
};

TradingDays tradingDays(const ActivitySeries& a, const VolatilitySeries& nu) {
  if (a.last_day >= nu.nu.size()) throw std::invalid_argument("activity extends past the volatility calendar");
  TradingDays td;
  td.ops.resize(a.active_days);
  td.nu.resize(a.active_days);
  Eigen::Index k = 0;
  for (Eigen::Index t = 0; t < a.counts.size(); ++t) {
    if (a.counts(t) > 0) {
      td.ops(k) = a.counts(t);
      td.nu(k) = nu.nu(a.first_day + t);
      ++k;
    }
  }
  return td;
}

struct Calendar {
  double mean;
  double stddev;
};

ScoreOutcome score(const std::string& id, const Eigen::ArrayXd& ops, const Eigen::ArrayXd& nu,
                   const PolarizationOptions& options, const Calendar& calendar) {
  const auto days = static_cast<std::int32_t>(ops.size());
  if (days < options.min_days) return Exclusion{id, ExclusionReason::TooFewDays, days};
  if (isConstant(ops)) return Exclusion{id, ExclusionReason::ConstantActivity, days};
  if (isConstant(nu)) return Exclusion{id, ExclusionReason::ConstantVolatility, days};
  double rho = 0;
  if (options.moments == VolatilityMoments::TradingDays) {
    rho = pearson(ops, nu);
  } else {
    const auto mo = populationMoments(ops);
    rho = ((ops - mo.mean) * (nu - calendar.mean)).sum() / (static_cast<double>(days) * mo.stddev * calendar.stddev);
  }
  return PolarizationScore{id, rho, days};
}

Calendar calendarMoments(const VolatilitySeries& nu) {
  const auto m = populationMoments(nu.nu);
  return {m.mean, m.stddev};
}

}  // namespace

ScoreOutcome rhoOv(const ActivitySeries& a, const VolatilitySeries& nu, const PolarizationOptions& options) {
  const auto td = tradingDays(a, nu);
  const Calendar cal = options.moments == VolatilityMoments::Calendar ? calendarMoments(nu) : Calendar{0, 0};
  return score(a.investor_id, td.ops, td.nu, options, cal);
}

ScoreSet scoreAll(const ActivityMap& series, const VolatilitySeries& nu, const PolarizationOptions& options) {
  ScoreSet out;
  for (const auto& [id, s] : series) {
    auto outcome = rhoOv(s, nu, options);
    if (auto* sc = std::get_if<PolarizationScore>(&outcome))
      out.scores.push_back(std::move(*sc));
    else
      out.exclusions.push_back(std::get<Exclusion>(std::move(outcome)));
  }
  return out;
}

Histogram populationDistribution(const std::vector<PolarizationScore>& scores, int bins) {
  if (scores.empty()) throw std::invalid_argument("histogram of an empty score set");
  if (bins < 1) throw std::invalid_argument("histogram needs at least one bin");
  Histogram h;
  const double width = 2.0 / bins;
  std::vector<std::size_t> counts(static_cast<std::size_t>(bins), 0);
  Eigen::ArrayXd values(static_cast<Eigen::Index>(scores.size()));
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const double v = std::clamp(scores[i].rho_ov, -1.0, 1.0);
    values(static_cast<Eigen::Index>(i)) = scores[i].rho_ov;
    auto b = static_cast<int>(std::floor((v + 1.0) / width));
    ++counts[static_cast<std::size_t>(std::clamp(b, 0, bins - 1))];
  }
  const double n = static_cast<double>(scores.size());
  std::size_t mode = 0;
  for (int b = 0; b < bins; ++b) {
    const auto ub = static_cast<std::size_t>(b);
    h.centers.push_back(-1.0 + (b + 0.5) * width);
    h.density.push_back(static_cast<double>(counts[ub]) / (n * width));
    if (counts[ub] > counts[mode]) mode = ub;
  }
  const auto m = populationMoments(values);
  h.mean = m.mean;
  h.variance = m.stddev * m.stddev;
  h.mode_center = h.centers[mode];
  return h;
}

ShuffledBaseline shuffledBaseline(const ActivityMap& series, const VolatilitySeries& nu,
                                  const PolarizationOptions& options, const BaselineOptions& baseline) {
  if (baseline.replicas < 1) throw std::invalid_argument("baseline needs at least one replica");
  const Calendar cal = options.moments == VolatilityMoments::Calendar ? calendarMoments(nu) : Calendar{0, 0};
  struct Eligible {
    std::string id;
    TradingDays days;
  };
  std::vector<Eligible> eligible;
  for (const auto& [id, s] : series) {
    auto td = tradingDays(s, nu);
    if (std::holds_alternative<PolarizationScore>(score(id, td.ops, td.nu, options, cal)))
      eligible.push_back({id, std::move(td)});
  }
  if (eligible.empty()) throw DegenerateInput("no investor is eligible for a polarization score");

  ShuffledBaseline out;
  out.replicas = baseline.replicas;
  out.replica_variances.resize(static_cast<std::size_t>(baseline.replicas));
  std::vector<double> replica_means(static_cast<std::size_t>(baseline.replicas));
  parallelFor(out.replica_variances.size(), baseline.workers, [&](std::size_t r) {
    Rng rng(deriveSeed(baseline.seed, r));
    Eigen::ArrayXd rho(static_cast<Eigen::Index>(eligible.size()));
    for (std::size_t k = 0; k < eligible.size(); ++k) {
      Eigen::ArrayXd permuted = eligible[k].days.nu;
      std::shuffle(permuted.begin(), permuted.end(), rng);
      const auto outcome = score(eligible[k].id, eligible[k].days.ops, permuted, options, cal);
      rho(static_cast<Eigen::Index>(k)) = std::get<PolarizationScore>(outcome).rho_ov;
    }
    const auto m = populationMoments(rho);
    replica_means[r] = m.mean;
    out.replica_variances[r] = m.stddev * m.stddev;
  });
  const double n = static_cast<double>(baseline.replicas);
  out.shuffled_variance = std::accumulate(out.replica_variances.begin(), out.replica_variances.end(), 0.0) / n;
  out.shuffled_mean = std::accumulate(replica_means.begin(), replica_means.end(), 0.0) / n;
  if (baseline.replicas > 1) {
    double ss = 0;
    for (const double m : replica_means) ss += (m - out.shuffled_mean) * (m - out.shuffled_mean);
    out.shuffled_mean_se = std::sqrt(ss / (n - 1) / n);
  }
  return out;
}

PolarizationSummary summarize(const ScoreSet& scores, const Histogram& hist, const ShuffledBaseline& baseline) {
  PolarizationSummary s;
  s.mean = hist.mean;
  s.variance = hist.variance;
  s.mode_center = hist.mode_center;
  s.shuffled_variance = baseline.shuffled_variance;
  s.variance_ratio = baseline.shuffled_variance > 0 ? hist.variance / baseline.shuffled_variance : 0.0;
  s.scored = scores.scores.size();
  s.excluded = scores.exclusions.size();
  return s;
}

std::size_t attachScores(SyncNetwork& net, const std::vector<PolarizationScore>& scores) {
  std::unordered_map<std::string, double> by_id;
  for (const auto& s : scores) by_id.emplace(s.investor_id, s.rho_ov);
  std::size_t missing = 0;
  for (auto& node : net.nodes) {
    if (auto it = by_id.find(node.id); it != by_id.end()) {
      node.rho_ov = it->second;
    } else {
      node.rho_ov.reset();
      ++missing;
    }
  }
  return missing;
}

}  // namespace volpol
