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

// First order in eps: expanding C in the unperturbed sine modes gives
//
//   C_jk = 32 eps/(n+1)^2  sum_{p+m = n (mod 2)}
//            sin a_p sin a_m sin(a_p j) sin(a_m k) / (lambda_p + lambda_m),
//
// with lambda_m = omega/2 - 4 cos a_m - (8 i eps/(n+1)) sin^2 a_m. The sign
// matches the exact solver's convention (A has eigenvalues -lambda_m).
// Needs FFTW3 for the full-matrix evaluation.

#pragma once

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "xxdrive/chain_model.hpp"
#include "xxdrive/errors.hpp"
#include "xxdrive/steady_state_exact.hpp"

namespace xxdrive {

inline constexpr int kWeakElementMaxSize = 100000;
inline constexpr int kWeakMatrixMaxSize = 20000;

namespace detail {

// Mode data split by index parity so the inner sum over m is contiguous.
struct ParityModes {
  std::vector<double> lam_re, lam_im, weight;  // weight = sin a_m sin(a_m k)
};

struct WeakModes {
  int n = 0;
  std::vector<double> lam_re, lam_im;  // 1-based storage, index 0 unused
  ParityModes odd, even;               // m odd / m even
};

inline WeakModes weak_modes(const ChainParams& params, int k) {
  const int n = params.n;
  const auto spec = mode_energies(n, params.eps, params.omega);
  WeakModes w;
  w.n = n;
  w.lam_re.assign(n + 1, 0.0);
  w.lam_im.assign(n + 1, 0.0);
  for (int m = 1; m <= n; ++m) {
    w.lam_re[m] = spec.lambda[m - 1].real();
    w.lam_im[m] = spec.lambda[m - 1].imag();
    ParityModes& bucket = (m % 2) ? w.odd : w.even;
    bucket.lam_re.push_back(w.lam_re[m]);
    bucket.lam_im.push_back(w.lam_im[m]);
    bucket.weight.push_back(std::sin(spec.a[m - 1]) * std::sin(spec.a[m - 1] * k));
  }
  return w;
}

// sum_m weight_m / (lp + lambda_m), four interleaved partial sums so the loop
// vectorises without reassociation flags; fixed order, bitwise reproducible.
inline cplx inner_cauchy_sum(double lp_re, double lp_im, const ParityModes& modes) {
  const std::size_t len = modes.weight.size();
  const double* __restrict lr = modes.lam_re.data();
  const double* __restrict li = modes.lam_im.data();
  const double* __restrict v = modes.weight.data();
  double sr[4] = {0, 0, 0, 0}, si[4] = {0, 0, 0, 0};
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    for (int l = 0; l < 4; ++l) {
      const double dr = lp_re + lr[i + l];
      const double di = lp_im + li[i + l];
      const double f = v[i + l] / (dr * dr + di * di);
      sr[l] += f * dr;
      si[l] -= f * di;
    }
  }
  for (; i < len; ++i) {
    const double dr = lp_re + lr[i];
    const double di = lp_im + li[i];
    const double f = v[i] / (dr * dr + di * di);
    sr[0] += f * dr;
    si[0] -= f * di;
  }
  return {(sr[0] + sr[1]) + (sr[2] + sr[3]), (si[0] + si[1]) + (si[2] + si[3])};
}

// Neumaier-compensated complex accumulator.
struct CompensatedSum {
  double re = 0, im = 0, cre = 0, cim = 0;
  static void add(double& s, double& c, double x) {
    const double t = s + x;
    c += (std::abs(s) >= std::abs(x)) ? (s - t) + x : (x - t) + s;
    s = t;
  }
  void add(cplx x) {
    add(re, cre, x.real());
    add(im, cim, x.imag());
  }
  cplx value() const { return {re + cre, im + cim}; }
};

}  // namespace detail

/// Single element by the direct double sum, O(n^2). Linear in eps apart
/// from the dissipative shift in lambda.
inline cplx covariance_element_weak(const ChainParams& params, int j, int k) {
  params.validate();
  const int n = params.n;
  detail::require(j >= 1 && j <= n && k >= 1 && k <= n, "covariance_element_weak: site out of range");
  if (n > kWeakElementMaxSize)
    throw SizeGuardError("covariance_element_weak: n > 1e5 (O(n^2) per element)");
  const auto modes = detail::weak_modes(params, k);
  detail::CompensatedSum total;
  for (int p = 1; p <= n; ++p) {
    const double ap = wavenumber(n, p);
    const double u = std::sin(ap) * std::sin(ap * j);
    // m must satisfy p + m = n (mod 2)
    const bool m_odd = ((n - p) % 2 + 2) % 2 == 1;
    const auto& bucket = m_odd ? modes.odd : modes.even;
    total.add(u * detail::inner_cauchy_sum(modes.lam_re[p], modes.lam_im[p], bucket));
  }
  const double pref = 32.0 * params.eps / (double(n + 1) * double(n + 1));
  return pref * total.value();
}

/// Smallest |lambda_p + lambda_m| over parity-allowed pairs; strictly
/// positive whenever eps > 0.
inline double weak_min_denominator(const ChainParams& params) {
  params.validate();
  const auto s = mode_energies(params.n, params.eps, params.omega);
  double best = std::numeric_limits<double>::infinity();
  for (int p = 0; p < params.n; ++p)
    for (int m = 0; m < params.n; ++m)
      if (((p + m + 2 - params.n) % 2) == 0) best = std::min(best, std::abs(s.lambda[p] + s.lambda[m]));
  return best;
}

namespace detail {

inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

// In-place DST-I, Y_k = 2 sum_j X_j sin(pi (j+1)(k+1)/(n+1)), applied to
// `howmany` vectors laid out with the given stride/distance.
inline void dst1_many(double* data, int len, int howmany, int stride, int dist) {
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    const fftw_r2r_kind kind = FFTW_RODFT00;
    plan = fftw_plan_many_r2r(1, &len, howmany, data, nullptr, stride, dist, data, nullptr, stride,
                              dist, &kind, FFTW_ESTIMATE);
  }
  if (!plan) throw SolverError("FFTW could not create a DST-I plan");
  fftw_execute(plan);
  std::lock_guard<std::mutex> lock(fftw_planner_mutex());
  fftw_destroy_plan(plan);
}

}  // namespace detail

/// Full matrix: mask the kernel sin a_p sin a_m / (lambda_p + lambda_m) by
/// parity, then apply a 2-D sine transform (columns, then rows). O(n^2 log n).
inline CovarianceMatrix covariance_matrix_weak(const ChainParams& params) {
  params.validate();
  const int n = params.n;
  if (n > kWeakMatrixMaxSize)
    throw SizeGuardError("covariance_matrix_weak: n > 2e4 (O(n^2) memory)");
  const auto s = mode_energies(n, params.eps, params.omega);
  Eigen::MatrixXd kre = Eigen::MatrixXd::Zero(n, n), kim = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd sn = s.a.array().sin();
  for (int m = 0; m < n; ++m)
    for (int p = 0; p < n; ++p) {
      if ((p + m + 2 - n) % 2 != 0) continue;  // 1-based p+1, m+1
      const cplx d = s.lambda[p] + s.lambda[m];
      if (!(std::abs(d) > 0.0))
        throw SolverError("covariance_matrix_weak: vanishing denominator lambda_p + lambda_m");
      const cplx val = sn[p] * sn[m] / d;
      kre(p, m) = val.real();
      kim(p, m) = val.imag();
    }
  for (Eigen::MatrixXd* part : {&kre, &kim}) {
    detail::dst1_many(part->data(), n, n, 1, n);  // columns
    detail::dst1_many(part->data(), n, n, n, 1);  // rows
  }
  const double pref = 32.0 * params.eps / (double(n + 1) * double(n + 1)) / 4.0;
  CovarianceMatrix out{params, Method::weak, Eigen::MatrixXcd(n, n)};
  out.data.real() = pref * kre;
  out.data.imag() = pref * kim;
  return out;
}

/// |sin(p pi x) sin(m pi y) + sin(m pi x) sin(p pi y)| at x = j/(n+1),
/// y = k/(n+1); any integer j, k (zero on the grid edges 0 and n+1).
inline double pattern_value(int n, int p, int m, int j, int k) {
  const double x = double(j) / (n + 1), y = double(k) / (n + 1);
  const double pi = std::numbers::pi;
  return std::abs(std::sin(p * pi * x) * std::sin(m * pi * y) + std::sin(m * pi * x) * std::sin(p * pi * y));
}

/// Spatial shape of an isolated resonance omega_{p-m}, normalised to unit max.
inline Eigen::MatrixXd resonance_pattern(int n, int p, int m) {
  detail::require(n >= 2, "resonance_pattern: n must be >= 2");
  detail::require(p >= 1 && p <= n && m >= 1 && m <= n, "resonance_pattern: mode index out of range");
  if ((p + m - n) % 2 != 0)
    throw ParameterError("resonance_pattern: p + m must have the parity of n (got p=" + std::to_string(p) +
                         ", m=" + std::to_string(m) + ", n=" + std::to_string(n) + ")");
  Eigen::MatrixXd pat(n, n);
  for (int k = 1; k <= n; ++k)
    for (int j = 1; j <= n; ++j) pat(j - 1, k - 1) = pattern_value(n, p, m, j, k);
  const double mx = pat.maxCoeff();
  if (mx > 0) pat /= mx;
  return pat;
}

/// Normalised inner product of two real fields after removing their means,
/// clipped below at 0 (anti-correlated shapes count as no match).
/// `margin` drops that many rows/columns at each edge (the driven corners
/// carry a boundary layer that is not part of a resonance shape).
inline double pattern_overlap(const Eigen::MatrixXd& field, const Eigen::MatrixXd& pattern, int margin = 0) {
  detail::require(field.rows() == pattern.rows() && field.cols() == pattern.cols(),
                  "pattern_overlap: size mismatch");
  detail::require(margin >= 0 && 2 * margin < field.rows() && 2 * margin < field.cols(),
                  "pattern_overlap: margin too large");
  const auto rows = field.rows() - 2 * margin, cols = field.cols() - 2 * margin;
  Eigen::ArrayXXd a = field.block(margin, margin, rows, cols).array();
  Eigen::ArrayXXd b = pattern.block(margin, margin, rows, cols).array();
  a -= a.mean();
  b -= b.mean();
  const double na = std::sqrt((a * a).sum()), nb = std::sqrt((b * b).sum());
  if (!(na > 0.0) || !(nb > 0.0)) throw ParameterError("pattern_overlap: zero (or constant) input");
  return std::clamp((a * b).sum() / (na * nb), 0.0, 1.0);
}

inline double pattern_overlap(const CovarianceMatrix& C, const Eigen::MatrixXd& pattern, int margin = 0) {
  return pattern_overlap(Eigen::MatrixXd(C.data.cwiseAbs()), pattern, margin);
}

}  // namespace xxdrive
