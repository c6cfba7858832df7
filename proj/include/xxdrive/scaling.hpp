// Copyright 2026 The xxdrive Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "xxdrive/errors.hpp"

namespace xxdrive {

enum class FitKind { power_law, exponential };

struct ScalingFit {
  FitKind kind = FitKind::power_law;
  double value = 0.0;   ///< exponent alpha (power law) or length xi (exponential)
  double std_error = 0.0;
  std::vector<double> window;  ///< abscissae used, ascending
  double r_squared = 0.0;
  bool low_quality = false;    ///< r_squared below kMinRSquared

  double exponent() const { return value; }
  double length() const { return value; }
};

inline constexpr double kMinRSquared = 0.98;
inline constexpr std::size_t kMinFitPoints = 5;

struct LineFit {
  double slope = 0.0, intercept = 0.0, slope_stderr = 0.0, r_squared = 0.0;
};

/// Ordinary least squares y = intercept + slope * x.
inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  detail::require(x.size() == y.size() && x.size() >= 3, "fit_line: need >= 3 matching points");
  const double N = double(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= N;
  my /= N;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  detail::require(sxx > 0.0, "fit_line: abscissae are all equal");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double sse = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    sse += r * r;
  }
  f.slope_stderr = std::sqrt(std::max(sse, 0.0) / (N - 2) / sxx);
  f.r_squared = syy > 0.0 ? 1.0 - sse / syy : 1.0;
  return f;
}

namespace detail {

inline std::vector<std::pair<double, double>> sorted_points(std::vector<std::pair<double, double>> pts,
                                                            const char* who) {
  require(pts.size() >= kMinFitPoints, std::string(who) + ": need at least 5 points");
  for (const auto& [n, v] : pts)
    if (!(v > 0.0) || !std::isfinite(v)) throw ParameterError(std::string(who) + ": values must be positive");
  std::sort(pts.begin(), pts.end());
  return pts;
}

}  // namespace detail

/// value ~ n^{-alpha}, fitted in log-log coordinates.
inline ScalingFit fit_power_law(std::vector<std::pair<double, double>> points) {
  points = detail::sorted_points(std::move(points), "fit_power_law");
  std::vector<double> lx, ly;
  ScalingFit fit;
  for (const auto& [n, v] : points) {
    detail::require(n > 0.0, "fit_power_law: abscissae must be positive");
    lx.push_back(std::log(n));
    ly.push_back(std::log(v));
    fit.window.push_back(n);
  }
  const auto line = fit_line(lx, ly);
  fit.kind = FitKind::power_law;
  fit.value = -line.slope;
  fit.std_error = line.slope_stderr;
  fit.r_squared = line.r_squared;
  fit.low_quality = line.r_squared < kMinRSquared;
  return fit;
}

/// How the decay length enters the exponent: the midpoint current of a chain
/// of length n sits n/2 from each driven end, so it decays as exp(-n/(2 xi));
/// a profile along the chain decays as exp(-k/xi).
enum class DecayConvention { chain_length, profile };

inline ScalingFit fit_exponential(std::vector<std::pair<double, double>> points,
                                  DecayConvention convention = DecayConvention::chain_length) {
  points = detail::sorted_points(std::move(points), "fit_exponential");
  std::vector<double> x, ly;
  ScalingFit fit;
  for (const auto& [n, v] : points) {
    x.push_back(n);
    ly.push_back(std::log(v));
    fit.window.push_back(n);
  }
  const auto line = fit_line(x, ly);
  if (!(line.slope < 0.0)) throw ParameterError("fit_exponential: data are not decaying");
  const double c = convention == DecayConvention::chain_length ? 2.0 : 1.0;
  fit.kind = FitKind::exponential;
  fit.value = -1.0 / (c * line.slope);
  fit.std_error = line.slope_stderr / (c * line.slope * line.slope);
  fit.r_squared = line.r_squared;
  fit.low_quality = line.r_squared < kMinRSquared;
  return fit;
}

/// Sizes n0 * factor^{i / per_window} rounded, deduplicated, in [n_min, n_max].
inline std::vector<int> geometric_sizes(int n_min, int n_max, double factor, int per_window) {
  detail::require(n_min >= 2 && n_max >= n_min, "geometric_sizes: need 2 <= n_min <= n_max");
  detail::require(factor > 1.0 && per_window >= 1, "geometric_sizes: need factor > 1, per_window >= 1");
  std::vector<int> out;
  const double step = std::pow(factor, 1.0 / per_window);
  for (double v = n_min; v <= n_max * (1.0 + 1e-12); v *= step) {
    const int n = static_cast<int>(std::lround(v));
    if (out.empty() || n != out.back()) out.push_back(n);
  }
  return out;
}

/// Averages (n, value) over consecutive geometric windows [n0, factor * n0).
/// Windows with fewer than min_points entries are dropped. Each window is
/// represented by the geometric mean of its n and the arithmetic mean value.
inline std::vector<std::pair<double, double>> window_average(std::vector<std::pair<double, double>> pts,
                                                             double factor, int min_points) {
  detail::require(factor > 1.0 && min_points >= 1, "window_average: need factor > 1, min_points >= 1");
  std::sort(pts.begin(), pts.end());
  std::vector<std::pair<double, double>> out;
  std::size_t i = 0;
  while (i < pts.size()) {
    const double lo = pts[i].first;
    std::size_t j = i;
    double log_n = 0, sum = 0;
    while (j < pts.size() && pts[j].first < lo * factor) {
      log_n += std::log(pts[j].first);
      sum += pts[j].second;
      ++j;
    }
    const double cnt = double(j - i);
    if (int(j - i) >= min_points) out.emplace_back(std::exp(log_n / cnt), sum / cnt);
    i = j;
  }
  return out;
}

}  // namespace xxdrive
