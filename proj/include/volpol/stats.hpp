#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <vector>

#include "volpol/error.hpp"

namespace volpol {

template <typename Scalar>
struct Moments {
  Scalar mean;
  Scalar stddev;  // population (1/n) normalization
};

template <typename Derived>
Moments<typename Derived::Scalar> populationMoments(const Eigen::ArrayBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  const auto n = static_cast<Scalar>(x.size());
  const Scalar mean = x.sum() / n;
  const Scalar var = (x - mean).square().sum() / n;
  return {mean, std::sqrt(var)};
}

/// True when the spread is zero up to rounding (relative 1e-12), i.e. the
/// population variance vanishes.
template <typename Derived>
bool isConstant(const Eigen::ArrayBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  if (x.size() == 0) return true;
  const Scalar hi = x.maxCoeff();
  const Scalar lo = x.minCoeff();
  const Scalar scale = std::max({Scalar(1), std::abs(hi), std::abs(lo)});
  return hi - lo <= Scalar(1e-12) * scale;
}

/// Product-moment correlation with population normalization:
/// (1/n) sum (x - mean_x)(y - mean_y) / (sd_x sd_y), clamped to [-1, 1].
/// Throws DegenerateInput when either input is constant.
template <typename DX, typename DY>
typename DX::Scalar pearson(const Eigen::ArrayBase<DX>& x, const Eigen::ArrayBase<DY>& y) {
  using Scalar = typename DX::Scalar;
  if (x.size() != y.size()) throw std::invalid_argument("pearson: length mismatch");
  if (x.size() < 2) throw DegenerateInput("correlation needs at least two observations");
  if (isConstant(x) || isConstant(y)) throw DegenerateInput("correlation undefined for a constant series");
  const auto mx = populationMoments(x);
  const auto my = populationMoments(y);
  const auto n = static_cast<Scalar>(x.size());
  const Scalar r = ((x - mx.mean) * (y - my.mean)).sum() / (n * mx.stddev * my.stddev);
  return std::clamp(r, Scalar(-1), Scalar(1));
}

/// Empirical quantile with linear interpolation between order statistics
/// (the R type-7 definition). `sorted` must be ascending and nonempty.
template <typename Scalar>
Scalar sortedQuantile(const std::vector<Scalar>& sorted, double q) {
  if (sorted.size() == 1) return sorted.front();
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + static_cast<Scalar>(frac) * (sorted[hi] - sorted[lo]);
}

}  // namespace volpol
