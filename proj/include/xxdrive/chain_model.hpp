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

// Model parameters, lattice matrices and free-mode data of the boundary
// driven XX chain. Everything downstream is computed at unit driving
// amplitude; mu0 only scales observables.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "xxdrive/errors.hpp"

namespace xxdrive {

using cplx = std::complex<double>;

/// Bandwidth of the chain in units of the exchange coupling. Above this
/// driving frequency no pair of free modes can resonate.
inline constexpr double kCriticalFrequency = 8.0;

struct ChainParams {
  int n = 2;          ///< number of sites
  double eps = 0.1;   ///< bath coupling
  double mu0 = 1.0;   ///< driving amplitude
  double omega = 0.0; ///< driving frequency

  void validate() const {
    detail::require(n >= 2, "chain length n must be >= 2 (got " + std::to_string(n) + ")");
    detail::require(std::isfinite(eps) && eps > 0.0, "coupling eps must be > 0");
    detail::require(std::isfinite(omega) && omega >= 0.0, "driving frequency omega must be >= 0");
    detail::require(std::isfinite(mu0), "driving amplitude mu0 must be finite");
  }

  ChainParams with_omega(double w) const {
    ChainParams p = *this;
    p.omega = w;
    return p;
  }
  ChainParams with_n(int size) const {
    ChainParams p = *this;
    p.n = size;
    return p;
  }
};

/// Wavenumber a_k = pi k / (n + 1).
inline double wavenumber(int n, double k) { return std::numbers::pi * k / (n + 1); }

/// Free-mode energy 4 cos a_p.
inline double mode_energy(int n, int p) { return 4.0 * std::cos(wavenumber(n, p)); }

/// (-1)^k for integer k.
inline constexpr double parity_sign(long long k) { return (k % 2 == 0) ? 1.0 : -1.0; }

struct LatticeMatrices {
  Eigen::MatrixXd J;  ///< nearest-neighbour hopping
  Eigen::MatrixXd R;  ///< bath-coupled sites (1,1) and (n,n)
  Eigen::MatrixXd P;  ///< driving pattern, +1 at site 1 and -1 at site n
  Eigen::MatrixXd O;  ///< staggered sign (-1)^(k+1)
  Eigen::MatrixXd S;  ///< source O P
};

inline LatticeMatrices build_static_matrices(const ChainParams& params) {
  detail::require(params.n >= 2, "build_static_matrices: n must be >= 2");
  const int n = params.n;
  LatticeMatrices m;
  m.J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k + 1 < n; ++k) {
    m.J(k, k + 1) = 1.0;
    m.J(k + 1, k) = 1.0;
  }
  m.R = Eigen::MatrixXd::Zero(n, n);
  m.R(0, 0) = 1.0;
  m.R(n - 1, n - 1) = 1.0;
  m.P = Eigen::MatrixXd::Zero(n, n);
  m.P(0, 0) = 1.0;
  m.P(n - 1, n - 1) = -1.0;
  m.O = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) m.O(k, k) = parity_sign(k);  // 0-based: (-1)^{(k+1)+1}
  m.S = m.O * m.P;
  return m;
}

struct ModeSpectrum {
  Eigen::VectorXd a;          ///< wavenumbers a_k, k = 1..n
  Eigen::VectorXd energies;   ///< 4 cos a_p
  Eigen::VectorXd beta0;      ///< omega/2 - 4 cos a_j
  Eigen::VectorXcd beta1;     ///< -(8 i eps/(n+1)) sin^2 a_j
  Eigen::VectorXcd lambda;    ///< beta0 + beta1
};

inline ModeSpectrum mode_energies(int n, double eps, double omega) {
  detail::require(n >= 2, "mode_energies: n must be >= 2");
  ModeSpectrum s;
  s.a.resize(n);
  s.energies.resize(n);
  s.beta0.resize(n);
  s.beta1.resize(n);
  s.lambda.resize(n);
  const double shift = 8.0 * eps / (n + 1);
  for (int k = 0; k < n; ++k) {
    const double a = wavenumber(n, k + 1);
    const double sn = std::sin(a);
    s.a[k] = a;
    s.energies[k] = 4.0 * std::cos(a);
    s.beta0[k] = 0.5 * omega - s.energies[k];
    s.beta1[k] = cplx(0.0, -shift * sn * sn);
    s.lambda[k] = s.beta0[k] + s.beta1[k];
  }
  return s;
}

struct Resonance {
  int p = 0;
  int m = 0;
  double omega = 0.0;  ///< eps_p + eps_m
};

struct ResonanceTable {
  std::vector<Resonance> entries;  ///< sorted ascending in omega
  double width_scale = 0.0;        ///< eps / n

  /// Entry with frequency closest to w; throws if empty.
  const Resonance& nearest(double w) const {
    if (entries.empty()) throw ParameterError("resonance table is empty");
    auto it = std::lower_bound(entries.begin(), entries.end(), w,
                               [](const Resonance& r, double x) { return r.omega < x; });
    if (it == entries.end()) return entries.back();
    if (it == entries.begin()) return *it;
    auto prev = std::prev(it);
    return (w - prev->omega <= it->omega - w) ? *prev : *it;
  }

  /// Entry for the unordered pair (p, m), or nullptr.
  const Resonance* find(int p, int m) const {
    if (p > m) std::swap(p, m);
    for (const auto& r : entries)
      if (r.p == p && r.m == m) return &r;
    return nullptr;
  }
};

enum class FrequencySign { positive, all };

namespace detail {

inline void sort_resonances(std::vector<Resonance>& entries) {
  std::sort(entries.begin(), entries.end(), [](const Resonance& x, const Resonance& y) {
    if (x.omega != y.omega) return x.omega < y.omega;
    if (x.p != y.p) return x.p < y.p;
    return x.m < y.m;
  });
}

}  // namespace detail

/// Full table of pair frequencies eps_p + eps_m with p <= m and
/// p + m = n (mod 2). O(n^2); use resonances_near for very long chains.
inline ResonanceTable resonance_frequencies(const ChainParams& params,
                                            FrequencySign sign = FrequencySign::positive) {
  params.validate();
  const int n = params.n;
  if (n > 10000)
    throw SizeGuardError("resonance_frequencies: n > 1e4, use resonances_near for a frequency window");
  std::vector<double> e(n + 1);
  for (int p = 1; p <= n; ++p) e[p] = mode_energy(n, p);
  ResonanceTable table;
  table.width_scale = params.eps / n;
  for (int p = 1; p <= n; ++p) {
    for (int m = p; m <= n; ++m) {
      if ((p + m - n) % 2 != 0) continue;
      const double w = e[p] + e[m];
      if (sign == FrequencySign::positive && !(w > 0.0)) continue;
      table.entries.push_back({p, m, w});
    }
  }
  detail::sort_resonances(table.entries);
  return table;
}

/// Resonances with |omega_{p-m} - center| <= half_width, generated lazily
/// (energies are monotone in the mode index, so each p needs one bisection).
inline ResonanceTable resonances_near(const ChainParams& params, double center, double half_width) {
  params.validate();
  detail::require(half_width >= 0.0, "resonances_near: half_width must be >= 0");
  const int n = params.n;
  ResonanceTable table;
  table.width_scale = params.eps / n;
  const double lo = center - half_width, hi = center + half_width;
  for (int p = 1; p <= n; ++p) {
    const double ep = mode_energy(n, p);
    // eps_m decreasing in m: find m range with lo - ep <= eps_m <= hi - ep.
    auto first_below = [&](double threshold) {
      int l = 1, r = n + 1;  // first m with eps_m < threshold
      while (l < r) {
        const int mid = (l + r) / 2;
        if (mode_energy(n, mid) < threshold) r = mid; else l = mid + 1;
      }
      return l;
    };
    const int m_begin = std::max(p, first_below(hi - ep + 1e-15));
    const int m_end = first_below(lo - ep - 1e-15);
    for (int m = m_begin; m < m_end; ++m) {
      if ((p + m - n) % 2 != 0) continue;
      const double w = ep + mode_energy(n, m);
      if (w >= lo && w <= hi) table.entries.push_back({p, m, w});
    }
  }
  detail::sort_resonances(table.entries);
  return table;
}

}  // namespace xxdrive
