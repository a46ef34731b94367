#pragma once

// Independent reference implementations for tests. Plain loops over
// std::vector in long double; nothing here calls into the library's
// statistics code.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

inline long double mean(const std::vector<double>& v) {
  long double s = 0;
  for (double x : v) s += x;
  return s / v.size();
}

inline long double popsd(const std::vector<double>& v) {
  const long double m = mean(v);
  long double s = 0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / v.size());
}

/// rho = (1/T) sum_t (x_t - mean_x)(y_t - mean_y) / (sd_x sd_y)
inline double crossCorrelation(const std::vector<double>& x, const std::vector<double>& y) {
  const long double mx = mean(x), my = mean(y), sx = popsd(x), sy = popsd(y);
  long double s = 0;
  for (std::size_t t = 0; t < x.size(); ++t) s += (x[t] - mx) * (y[t] - my) / (sx * sy);
  return static_cast<double>(s / x.size());
}

/// Activity-volatility correlation over days with ops > 0 only.
inline double rhoOv(const std::vector<double>& ops, const std::vector<double>& nu) {
  std::vector<double> o, v;
  for (std::size_t t = 0; t < ops.size(); ++t) {
    if (ops[t] > 0) {
      o.push_back(ops[t]);
      v.push_back(nu[t]);
    }
  }
  return crossCorrelation(o, v);
}

/// Hill sum evaluated directly from a full descending sort.
inline double hill(std::vector<double> v, std::size_t k) {
  std::sort(v.begin(), v.end(), std::greater<>{});
  long double s = 0;
  for (std::size_t j = 0; j < k; ++j) s += std::log(static_cast<long double>(v[j]) / v[k]);
  return static_cast<double>(k / s);
}

/// Trailing moving-average residuals by explicit window sums.
inline std::vector<double> trailingResiduals(const std::vector<double>& x, int w) {
  std::vector<double> out;
  for (std::size_t t = static_cast<std::size_t>(w - 1); t < x.size(); ++t) {
    long double s = 0;
    for (int k = 0; k < w; ++k) s += x[t - static_cast<std::size_t>(k)];
    out.push_back(static_cast<double>(x[t] - s / w));
  }
  return out;
}

/// Assortativity as the Pearson correlation of attribute values at the two
/// ends of every edge, each edge taken in both orientations.
inline double endpointAssortativity(const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                                    const std::vector<int>& attr) {
  std::vector<double> a, b;
  for (const auto& [u, v] : edges) {
    a.push_back(attr[u]);
    b.push_back(attr[v]);
    a.push_back(attr[v]);
    b.push_back(attr[u]);
  }
  return crossCorrelation(a, b);
}

/// Q = sum_c [ L_c / m - (d_c / 2m)^2 ] for an unweighted graph.
inline double modularity(const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                         const std::vector<int>& community) {
  std::map<int, long double> internal, degree;
  const long double m = edges.size();
  for (const auto& [u, v] : edges) {
    degree[community[u]] += 1;
    degree[community[v]] += 1;
    if (community[u] == community[v]) internal[community[u]] += 1;
  }
  long double q = 0;
  for (const auto& [c, d] : degree) q += internal[c] / m - (d / (2 * m)) * (d / (2 * m));
  return static_cast<double>(q);
}

/// Pareto(alpha) draws with scale 1 by inversion.
inline std::vector<double> pareto(std::size_t n, double alpha, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> out(n);
  for (auto& x : out) x = std::pow(1.0 - u(rng), -1.0 / alpha);
  return out;
}

}  // namespace oracle
