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

// Experiment harness: frequency sweeps of the midpoint current and
// size-scaling studies, each point an independent solve.

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "xxdrive/chain_model.hpp"
#include "xxdrive/errors.hpp"
#include "xxdrive/observables.hpp"
#include "xxdrive/scaling.hpp"
#include "xxdrive/steady_state_exact.hpp"
#include "xxdrive/weak_coupling.hpp"

namespace xxdrive {

/// Largest chain solved exactly when the method is picked automatically.
inline constexpr int kAutoExactMaxSize = 1024;

struct SweepRecord {
  double omega = 0.0;
  int n = 0;
  double eps = 0.0;
  double mu0 = 1.0;
  Method method = Method::spectral;
  double current_re = 0.0;
  double current_im = 0.0;
  double current_abs = 0.0;
  bool failed = false;
  std::string error;  ///< solver message for failed points
};

inline Method auto_method(int n) { return n <= kAutoExactMaxSize ? Method::spectral : Method::weak; }

/// Complex midpoint current with mu0 and the sign convention applied.
/// Weak-coupling points evaluate the single element they need.
inline cplx midpoint_current_with(const ChainParams& params, Method method) {
  switch (method) {
    case Method::dense: return midpoint_current(solve_dense(params));
    case Method::spectral: return midpoint_current(solve_exact(params));
    case Method::schur: return midpoint_current(solve_schur(params));
    case Method::weak: {
      const int m = midpoint_bond(params.n);
      const cplx c = covariance_element_weak(params, m, m + 1);
      return kAmplitudeSign * kDcCurrentScale * 4.0 * params.mu0 * parity_sign(m + 1) * c;
    }
    default:
      throw ParameterError("method '" + std::string(to_string(method)) + "' does not support midpoint sweeps");
  }
}

/// Runs fn(i) for i in [0, count) on a bounded pool. Results are written by
/// index, so output order never depends on scheduling. The first exception
/// (lowest index) is rethrown after all workers finish.
inline void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& fn) {
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  std::vector<std::exception_ptr> errors(count);
  auto guarded = [&](std::size_t i) {
    try {
      fn(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) guarded(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) guarded(i);
      });
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

inline unsigned default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

struct AuditReport {
  std::size_t checked = 0;
  double worst = 0.0;       ///< largest relative disagreement seen
  double tolerance = 0.0;
  bool passed = true;
  std::vector<std::size_t> indices;
};

struct SweepOptions {
  std::optional<Method> method;  ///< empty: auto (exact up to n = 1024, weak beyond)
  unsigned workers = 0;          ///< 0: hardware concurrency
  bool audit = true;             ///< re-solve a 5% subsample when n <= 257
  unsigned audit_seed = 7u;
};

struct SweepResult {
  std::vector<SweepRecord> records;
  AuditReport audit;
};

inline constexpr int kAuditMaxSize = 257;

/// Relative agreement expected between a method and its audit partner.
inline double audit_tolerance(Method method, double eps) {
  switch (method) {
    case Method::weak:
    case Method::series: return std::max(20.0 * eps, 1e-6);
    default: return 1e-8;
  }
}

inline SweepRecord make_record(const ChainParams& p, Method method) {
  SweepRecord r;
  r.omega = p.omega;
  r.n = p.n;
  r.eps = p.eps;
  r.mu0 = p.mu0;
  r.method = method;
  try {
    const cplx j = midpoint_current_with(p, method);
    r.current_re = j.real();
    r.current_im = j.imag();
    r.current_abs = std::hypot(j.real(), j.imag());
  } catch (const SolverError& e) {
    r.failed = true;
    r.error = e.what();
    r.current_re = r.current_im = r.current_abs = std::numeric_limits<double>::quiet_NaN();
  }
  return r;
}

/// Midpoint current over an ascending omega grid. Solver failures are
/// recorded per point; the sweep itself only throws on bad parameters or a
/// failed audit.
inline SweepResult sweep_frequency(const ChainParams& params, const std::vector<double>& omega_grid,
                                   const SweepOptions& opt = {}) {
  params.validate();
  detail::require(!omega_grid.empty(), "sweep_frequency: omega grid is empty");
  detail::require(std::is_sorted(omega_grid.begin(), omega_grid.end()), "sweep_frequency: omega grid must be ascending");
  for (double w : omega_grid) params.with_omega(w).validate();
  const Method method = opt.method.value_or(auto_method(params.n));

  SweepResult out;
  out.records.resize(omega_grid.size());
  const unsigned workers = opt.workers ? opt.workers : default_workers();
  parallel_for(omega_grid.size(), workers,
               [&](std::size_t i) { out.records[i] = make_record(params.with_omega(omega_grid[i]), method); });

  if (opt.audit && params.n <= kAuditMaxSize) {
    // Partner: weak and series are checked against the exact solver, exact
    // solvers against the Schur route, which shares no eigenvectors.
    const Method partner = (method == Method::spectral || method == Method::dense) ? Method::schur : Method::spectral;
    const std::size_t count = std::max<std::size_t>(1, omega_grid.size() / 20);
    std::vector<std::size_t> idx(omega_grid.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::mt19937 rng(opt.audit_seed);
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(count);
    std::sort(idx.begin(), idx.end());
    out.audit.tolerance = audit_tolerance(method, params.eps);
    for (std::size_t i : idx) {
      const auto& rec = out.records[i];
      if (rec.failed) continue;
      const cplx a(rec.current_re, rec.current_im);
      const cplx b = midpoint_current_with(params.with_omega(rec.omega), partner);
      const double scale = std::max(std::abs(a), std::abs(b));
      const double rel = scale > 0.0 ? std::abs(a - b) / scale : 0.0;
      out.audit.worst = std::max(out.audit.worst, rel);
      out.audit.indices.push_back(i);
      ++out.audit.checked;
    }
    out.audit.passed = out.audit.worst <= out.audit.tolerance;
    if (!out.audit.passed)
      throw SolverError("sweep audit failed: relative disagreement " + std::to_string(out.audit.worst) +
                        " exceeds " + std::to_string(out.audit.tolerance));
  }
  return out;
}

/// n equally spaced frequencies in [lo, hi].
inline std::vector<double> linear_grid(double lo, double hi, int steps) {
  detail::require(steps >= 1 && hi >= lo, "linear_grid: need steps >= 1 and hi >= lo");
  std::vector<double> g(steps);
  for (int i = 0; i < steps; ++i) g[i] = steps == 1 ? lo : lo + (hi - lo) * double(i) / (steps - 1);
  return g;
}

/// Grid presets for smooth and resonance-resolving sweeps.
inline constexpr int kSmoothSweepPoints = 600;
inline constexpr int kResonanceSweepPoints = 4000;

struct ScalingOptions {
  std::optional<Method> method;
  std::optional<bool> windowed;  ///< empty: on for omega < 8
  double window_factor = 1.3;
  int min_per_window = 8;
  unsigned workers = 0;
};

struct ScalingStudy {
  ScalingFit fit;
  std::vector<std::pair<double, double>> raw;     ///< (n, |j_mid|)
  std::vector<std::pair<double, double>> fitted;  ///< points entering the fit
};

/// |j_mid| against n with the fit matching the regime: power law for
/// omega <= 8, exponential (|j| ~ exp(-n / 2 xi)) above.
inline ScalingStudy scaling_study(double omega, double eps, const std::vector<int>& n_list,
                                  const ScalingOptions& opt = {}) {
  detail::require(n_list.size() >= kMinFitPoints, "scaling_study: need at least 5 sizes");
  if (omega == kCriticalFrequency) {
    const bool all_even = std::all_of(n_list.begin(), n_list.end(), [](int n) { return n % 2 == 0; });
    const bool all_odd = std::all_of(n_list.begin(), n_list.end(), [](int n) { return n % 2 != 0; });
    if (!all_even && !all_odd)
      throw ParameterError(
          "scaling_study: at omega = 8 even and odd chains scale differently (n^-2 vs n^-3); "
          "pass an even-only or odd-only size list");
  }
  ScalingStudy study;
  study.raw.resize(n_list.size());
  const unsigned workers = opt.workers ? opt.workers : default_workers();
  parallel_for(n_list.size(), workers, [&](std::size_t i) {
    ChainParams p{n_list[i], eps, 1.0, omega};
    p.validate();
    const Method m = opt.method.value_or(auto_method(p.n));
    study.raw[i] = {double(p.n), std::abs(midpoint_current_with(p, m))};
  });
  const bool windowed = opt.windowed.value_or(omega < kCriticalFrequency);
  study.fitted = windowed ? window_average(study.raw, opt.window_factor, opt.min_per_window) : study.raw;
  study.fit = omega > kCriticalFrequency ? fit_exponential(study.fitted) : fit_power_law(study.fitted);
  return study;
}

}  // namespace xxdrive
