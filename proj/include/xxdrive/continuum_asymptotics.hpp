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

// Asymptotic pictures of C at and above the band edge.
//
// At omega = 8 the continuum limit of the stationary equation is Laplace's
// equation on the unit square with quadrupole sources at the two driven
// corners; the square's boundary is imposed with images. Above the edge the
// zeroth-order-in-eps equation is solved by a 1/omega series whose terms are
// lattice walks, summed in closed form by a 4F3 lattice Green's function.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "xxdrive/chain_model.hpp"
#include "xxdrive/errors.hpp"
#include "xxdrive/steady_state_exact.hpp"

namespace xxdrive {

struct ContinuumPoint {
  double x = 0.0;
  double y = 0.0;

  static ContinuumPoint from_sites(int n, int j, int k) {
    return {double(j) / (n + 1), double(k) / (n + 1)};
  }
  void validate() const {
    detail::require(x >= 0.0 && x <= 1.0 && y >= 0.0 && y <= 1.0,
                    "ContinuumPoint: coordinates must lie in [0, 1]");
  }
};

/// Quadrupole Green's function 4xy / (pi (x^2 + y^2)^2). Defined on the
/// whole plane minus the origin (the image sum needs negative arguments).
inline double greens_critical(double x, double y) {
  const double r2 = x * x + y * y;
  if (r2 == 0.0) throw ParameterError("greens_critical: singular at the origin");
  return 4.0 * x * y / (std::numbers::pi * r2 * r2);
}

inline double greens_critical(const ContinuumPoint& pt) { return greens_critical(pt.x, pt.y); }

/// Source strength of the continuum problem. The lattice source 4 eps S
/// becomes 2 eps once the hopping factor 2 in A is divided out.
inline double critical_prefactor(const ChainParams& params) {
  return 2.0 * params.eps / (double(params.n) * double(params.n));
}

/// Two nearest quadrupoles: one at each driven corner, the far one entering
/// with sign (-1)^n.
inline double critical_covariance_approx(const ChainParams& params, int j, int k) {
  params.validate();
  detail::require(j >= 1 && j <= params.n && k >= 1 && k <= params.n,
                  "critical_covariance_approx: site out of range");
  const auto pt = ContinuumPoint::from_sites(params.n, j, k);
  return critical_prefactor(params) *
         (greens_critical(pt.x, pt.y) + parity_sign(params.n) * greens_critical(pt.x - 1.0, pt.y - 1.0));
}

struct ImageSumResult {
  double value = 0.0;
  double error_estimate = 0.0;  ///< |S(s) - S(s-1)| at the last shell
  int shells = 0;
  bool converged = false;       ///< shell increments decreasing at the end
};

/// Quadrupole image lattice: sources at integer (X, Y) with X = Y (mod 2),
/// sign (-1)^{n X}. Shells are square rings around the domain corner nearest
/// to pt, which makes the truncated sum vanish exactly on the two edges
/// through that corner. Shell 0 is the corner itself.
inline ImageSumResult image_sum_critical(const ContinuumPoint& pt, const ChainParams& params, int shells) {
  params.validate();
  pt.validate();
  detail::require(shells >= 1, "image_sum_critical: shells must be >= 1");
  const int cx = (pt.x + pt.y <= 1.0) ? 0 : 1;
  const int cy = cx;
  auto term = [&](int X, int Y) {
    if ((X - Y) % 2 != 0) return 0.0;
    const double dx = pt.x - X, dy = pt.y - Y;
    if (dx == 0.0 && dy == 0.0) throw ParameterError("image_sum_critical: point sits on a source");
    const double sign = (X % 2 != 0) ? parity_sign(params.n) : 1.0;
    return sign * greens_critical(dx, dy);
  };
  std::vector<double> delta;
  double total = term(cx, cy);
  for (int s = 1; s <= shells; ++s) {
    double ring = 0.0;
    for (int d = -s; d <= s; ++d) {
      ring += term(cx + d, cy - s) + term(cx + d, cy + s);
      if (d != -s && d != s) ring += term(cx - s, cy + d) + term(cx + s, cy + d);
    }
    total += ring;
    delta.push_back(std::abs(ring));
  }
  ImageSumResult out;
  const double pref = critical_prefactor(params);
  out.value = pref * total;
  out.error_estimate = pref * delta.back();
  out.shells = shells;
  const double tiny = 1e-15 * std::abs(total);
  const std::size_t m = delta.size();
  out.converged = delta.back() <= tiny ||
                  (m >= 3 && delta[m - 1] <= delta[m - 2] && delta[m - 2] <= delta[m - 3]);
  if (m < 3 && shells >= 20) out.converged = false;
  return out;
}

struct SeriesCovariance {
  CovarianceMatrix covariance;
  double tail_bound = 0.0;  ///< bound on the max-norm of the dropped orders
  int order = 0;
};

/// C = sum_j omega^{-j} C_j, C_j = {2J, C_{j-1}}, C_0 = 4 eps S / omega.
/// Drops the eps R term of A, so this is the leading order in eps.
inline SeriesCovariance series_covariance(const ChainParams& params, int max_order) {
  params.validate();
  detail::require(max_order >= 0, "series_covariance: max_order must be >= 0");
  if (!(params.omega > kCriticalFrequency))
    throw DivergenceError("series_covariance: needs omega > 8 (got " + std::to_string(params.omega) + ")");
  const int n = params.n;
  const double w = params.omega;
  const auto lat = build_static_matrices(params);
  Eigen::MatrixXd term = 4.0 * params.eps * lat.S / w;
  Eigen::MatrixXd sum = term;
  const double c0 = term.cwiseAbs().maxCoeff();
  Eigen::MatrixXd next(n, n);
  for (int order = 1; order <= max_order; ++order) {
    // {2J, T} by neighbour shifts instead of dense products.
    next.setZero();
    next.topRows(n - 1) += term.bottomRows(n - 1);
    next.bottomRows(n - 1) += term.topRows(n - 1);
    next.leftCols(n - 1) += term.rightCols(n - 1);
    next.rightCols(n - 1) += term.leftCols(n - 1);
    term = (2.0 / w) * next;
    sum += term;
  }
  const double q = kCriticalFrequency / w;
  SeriesCovariance out{{params, Method::series, sum.cast<cplx>()}, 0.0, max_order};
  out.tail_bound = std::pow(q, max_order + 1) / (1.0 - q) * c0;
  return out;
}

/// Lattice Green's function
///   G_jk(w) = jk w^{-j-k} Gamma(j+k-1) Gamma(j+k+1)
///             4F3~[(s-1)/2, s/2, (s+1)/2, (s+2)/2; j+1, k+1, s+1; 16/w^2],
/// s = j + k, with the regularised 4F3 summed term by term in log space.
/// The series converges for w > 4; the chain itself needs w = omega/2 > 4.
/// G vanishes when j or k is 0 (the zero prefactor).
inline double lattice_green(int j, int k, double w) {
  detail::require(j >= 0 && k >= 0, "lattice_green: indices must be >= 0");
  if (!(w > 4.0)) throw DivergenceError("lattice_green: series diverges for w <= 4");
  if (j == 0 || k == 0) return 0.0;
  if (j > k) std::swap(j, k);  // symmetric; fixes the summation order
  const double s = j + k;
  const double a[4] = {(s - 1) / 2, s / 2, (s + 1) / 2, (s + 2) / 2};
  const double b[3] = {double(j) + 1, double(k) + 1, s + 1};
  const double logz = std::log(16.0 / (w * w));
  double la0 = 0.0;
  for (double ai : a) la0 -= std::lgamma(ai);
  double lmax = -std::numeric_limits<double>::infinity();
  std::vector<double> logs;
  constexpr int kMaxTerms = 2000000;
  for (int m = 0; m < kMaxTerms; ++m) {
    double lt = la0 + m * logz - std::lgamma(m + 1.0);
    for (double ai : a) lt += std::lgamma(ai + m);
    for (double bi : b) lt -= std::lgamma(bi + m);
    logs.push_back(lt);
    if (lt > lmax) lmax = lt;
    // Terms rise, peak, then fall geometrically; stop well past the peak.
    if (m > 0 && lt < logs[m - 1] && lt < lmax + std::log(1e-18)) break;
    if (m + 1 == kMaxTerms) throw DivergenceError("lattice_green: series did not converge");
  }
  double acc = 0.0;
  for (double lt : logs) acc += std::exp(lt - lmax);
  const double log_series = lmax + std::log(acc);
  const double log_pref = std::log(double(j) * double(k)) - s * std::log(w) + std::lgamma(s - 1) + std::lgamma(s + 1);
  return std::exp(log_pref + log_series);
}

/// Leading-order C near the diagonal for omega > 8, as a sum of the lattice
/// Green's functions of the two driven corners:
///   C_jk = eps omega [G_jk(omega/2) + (-1)^n G_{n+1-j, n+1-k}(omega/2)].
inline double near_diagonal_covariance(const ChainParams& params, int j, int k) {
  params.validate();
  detail::require(j >= 1 && j <= params.n && k >= 1 && k <= params.n,
                  "near_diagonal_covariance: site out of range");
  if (!(params.omega > kCriticalFrequency))
    throw DivergenceError("near_diagonal_covariance: needs omega > 8");
  const int n = params.n;
  const double w = 0.5 * params.omega;
  return params.eps * params.omega *
         (lattice_green(j, k, w) + parity_sign(n) * lattice_green(n + 1 - j, n + 1 - k, w));
}

/// xi = 1 / sqrt(omega - 8).
inline double evanescence_length(double omega) {
  if (!(omega > kCriticalFrequency))
    throw ParameterError("evanescence_length: defined only for omega > 8");
  return 1.0 / std::sqrt(omega - kCriticalFrequency);
}

}  // namespace xxdrive
