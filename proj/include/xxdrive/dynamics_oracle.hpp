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

// Time-domain oracle. Integrates the full 2n x 2n Majorana covariance
//
//     dZ/dt = -X^T Z - Z X + mu0 eps Y cos(omega t),
//     X = [[2 eps R, 2J], [-2J, 2 eps R]],  Y = [[0, -4P], [4P, 0]],
//
// until it is periodic and reads off the e^{i omega t} harmonic. Shares no
// code with the stationary solvers beyond the lattice matrices.

#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <boost/numeric/odeint.hpp>

#include "xxdrive/chain_model.hpp"
#include "xxdrive/errors.hpp"
#include "xxdrive/steady_state_exact.hpp"

namespace xxdrive {

struct DynamicsGenerators {
  Eigen::MatrixXd X;
  Eigen::MatrixXd Y;
};

inline DynamicsGenerators build_generators(const ChainParams& params) {
  detail::require(params.n >= 2, "build_generators: n must be >= 2");
  detail::require(params.eps >= 0.0, "build_generators: eps must be >= 0");
  const int n = params.n;
  const auto lat = build_static_matrices(params);
  DynamicsGenerators g;
  g.X = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  g.X.topLeftCorner(n, n) = 2.0 * params.eps * lat.R;
  g.X.bottomRightCorner(n, n) = 2.0 * params.eps * lat.R;
  g.X.topRightCorner(n, n) = 2.0 * lat.J;
  g.X.bottomLeftCorner(n, n) = -2.0 * lat.J;
  g.Y = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  g.Y.topRightCorner(n, n) = -4.0 * lat.P;
  g.Y.bottomLeftCorner(n, n) = 4.0 * lat.P;
  return g;
}

/// 1 / (slowest decay rate of Z), from the spectrum of X.
inline double relaxation_time(const ChainParams& params) {
  const auto g = build_generators(params);
  Eigen::EigenSolver<Eigen::MatrixXd> es(g.X, false);
  const double rate = 2.0 * es.eigenvalues().real().minCoeff();
  if (!(rate > 0.0)) return std::numeric_limits<double>::infinity();
  return 1.0 / rate;
}

enum class InitialCondition { zero, random };

/// Seed for the random antisymmetric initial condition.
inline constexpr unsigned kOracleSeed = 20260415u;

struct OracleOptions {
  double t_end = 1000.0;
  double tol = 1e-10;
  int samples_per_period = 64;
  int periods = 10;
  InitialCondition initial = InitialCondition::zero;
};

struct CovarianceTrajectory {
  ChainParams params;
  std::vector<double> times;        ///< samples over the final periods
  std::vector<Eigen::MatrixXd> Z;   ///< Z(t) at those times
  double antisymmetry_error = 0.0;  ///< max |Z + Z^T| over samples
};

inline Eigen::MatrixXd random_antisymmetric(int dim, unsigned seed = kOracleSeed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j) {
      Z(i, j) = u(rng);
      Z(j, i) = -Z(i, j);
    }
  return Z;
}

/// Adaptive Dormand-Prince integration with dense output. For omega = 0 the
/// sample window is 10 time units.
inline CovarianceTrajectory integrate_covariance(const ChainParams& params, const OracleOptions& opt = {}) {
  detail::require(params.n >= 2, "integrate_covariance: n must be >= 2");
  detail::require(params.eps >= 0.0 && std::isfinite(params.eps), "integrate_covariance: eps must be >= 0");
  detail::require(params.omega >= 0.0, "integrate_covariance: omega must be >= 0");
  detail::require(opt.tol > 0.0 && opt.tol <= 1e-8, "integrate_covariance: tol must be in (0, 1e-8]");
  detail::require(opt.samples_per_period >= 64 && opt.periods >= 2,
                  "integrate_covariance: need >= 64 samples per period over >= 2 periods");
  const int dim = 2 * params.n;
  const auto g = build_generators(params);
  const Eigen::MatrixXd Xt = g.X.transpose();
  const Eigen::MatrixXd F = params.mu0 * params.eps * g.Y;
  const double w = params.omega;
  const double period = (w > 0.0) ? 2.0 * std::numbers::pi / w : 1.0;
  const double window = opt.periods * period;
  detail::require(opt.t_end >= window, "integrate_covariance: t_end shorter than the sampling window");

  using State = std::vector<double>;
  auto rhs = [&](const State& z, State& dz, double t) {
    Eigen::Map<const Eigen::MatrixXd> Z(z.data(), dim, dim);
    Eigen::Map<Eigen::MatrixXd> D(dz.data(), dim, dim);
    D.noalias() = -Xt * Z;
    D.noalias() -= Z * g.X;
    D += std::cos(w * t) * F;
  };

  State z(std::size_t(dim) * dim, 0.0);
  if (opt.initial == InitialCondition::random) {
    const Eigen::MatrixXd Z0 = random_antisymmetric(dim);
    std::copy(Z0.data(), Z0.data() + z.size(), z.begin());
  }

  const int total = opt.samples_per_period * opt.periods;
  const double t0 = opt.t_end - window;
  std::vector<double> grid;
  if (t0 > 0.0) grid.push_back(0.0);
  for (int i = 0; i <= total; ++i) grid.push_back(t0 + window * double(i) / total);

  CovarianceTrajectory traj;
  traj.params = params;
  auto observer = [&](const State& s, double t) {
    if (t < t0 - 1e-12) return;
    traj.times.push_back(t);
    traj.Z.emplace_back(Eigen::Map<const Eigen::MatrixXd>(s.data(), dim, dim));
  };

  namespace ode = boost::numeric::odeint;
  try {
    auto stepper = ode::make_dense_output(opt.tol, opt.tol, ode::runge_kutta_dopri5<State>());
    ode::integrate_times(stepper, rhs, z, grid.begin(), grid.end(), 1e-3, observer,
                         ode::max_step_checker(50'000'000));
  } catch (const ode::no_progress_error& e) {
    throw StiffnessError(std::string("integrate_covariance: no progress (") + e.what() +
                         "); try a smaller n or a larger eps");
  } catch (const ode::step_adjustment_error& e) {
    throw StiffnessError(std::string("integrate_covariance: step size underflow (") + e.what() + ")");
  }
  for (const auto& Z : traj.Z)
    traj.antisymmetry_error = std::max(traj.antisymmetry_error, (Z + Z.transpose()).cwiseAbs().maxCoeff());
  return traj;
}

struct HarmonicExtraction {
  /// C at unit driving amplitude (raw / mu0; zero when mu0 = 0).
  CovarianceMatrix covariance;
  Eigen::MatrixXcd raw;          ///< O (Z0 + i Z2) as measured, proportional to mu0
  Eigen::MatrixXcd M;            ///< complex harmonic, Z(t) = Re(e^{i omega t} M)
  double periodicity = 0.0;      ///< max |Z(t) - Z(t - T)| / max |Z|
  double checkerboard = 0.0;     ///< forbidden-parity entries / max |C|
};

inline constexpr double kPeriodicityTolerance = 1e-6;

/// Least-squares fit of Z(t) ~ A0 + Ac cos(omega t) + As sin(omega t) over the
/// sampled periods; M = Ac - i As. At omega = 0 the stationary value is used.
inline HarmonicExtraction extract_harmonic(const CovarianceTrajectory& traj, double omega) {
  detail::require(traj.Z.size() >= 3, "extract_harmonic: trajectory too short");
  const int dim = static_cast<int>(traj.Z.front().rows());
  const int n = dim / 2;
  const std::size_t N = traj.Z.size();

  double scale = 0.0;
  for (const auto& Z : traj.Z) scale = std::max(scale, Z.cwiseAbs().maxCoeff());
  // One period back in samples (the grid is uniform over whole periods).
  std::size_t lag = 1;
  if (omega > 0.0) {
    const double dt = traj.times[1] - traj.times[0];
    lag = static_cast<std::size_t>(std::llround(2.0 * std::numbers::pi / omega / dt));
  } else {
    lag = N - 1;
  }
  double drift = 0.0;
  for (std::size_t i = lag; i < N; ++i) drift = std::max(drift, (traj.Z[i] - traj.Z[i - lag]).cwiseAbs().maxCoeff());

  HarmonicExtraction out;
  out.periodicity = scale > 0.0 ? drift / scale : 0.0;
  if (out.periodicity > kPeriodicityTolerance)
    throw TransientError("extract_harmonic: trajectory not periodic (relative drift " +
                         std::to_string(out.periodicity) + "); increase t_end");

  if (omega > 0.0) {
    Eigen::Matrix3d G = Eigen::Matrix3d::Zero();
    std::vector<Eigen::Vector3d> basis(N);
    for (std::size_t i = 0; i < N; ++i) {
      const double t = traj.times[i];
      basis[i] = Eigen::Vector3d(1.0, std::cos(omega * t), std::sin(omega * t));
      G += basis[i] * basis[i].transpose();
    }
    const Eigen::Matrix3d Ginv = G.inverse();
    Eigen::MatrixXd Ac = Eigen::MatrixXd::Zero(dim, dim), As = Eigen::MatrixXd::Zero(dim, dim);
    for (std::size_t i = 0; i < N; ++i) {
      const Eigen::Vector3d wgt = Ginv * basis[i];
      Ac += wgt[1] * traj.Z[i];
      As += wgt[2] * traj.Z[i];
    }
    out.M = Ac.cast<cplx>() - cplx(0.0, 1.0) * As.cast<cplx>();
  } else {
    out.M = traj.Z.back().cast<cplx>();
  }

  const Eigen::MatrixXcd Z0 = out.M.topLeftCorner(n, n);
  const Eigen::MatrixXcd Z2 = out.M.bottomLeftCorner(n, n);
  const auto lat = build_static_matrices(traj.params);
  out.raw = lat.O.cast<cplx>() * (Z0 + cplx(0.0, 1.0) * Z2);

  const double cmax = out.raw.cwiseAbs().maxCoeff();
  double forbidden = 0.0;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      forbidden = std::max(forbidden, std::abs((j + k) % 2 == 0 ? Z0(j, k) : Z2(j, k)));
  out.checkerboard = cmax > 0.0 ? forbidden / cmax : 0.0;

  const double mu0 = traj.params.mu0;
  Eigen::MatrixXcd unit = (mu0 != 0.0) ? Eigen::MatrixXcd(out.raw / mu0) : Eigen::MatrixXcd::Zero(n, n);
  out.covariance = CovarianceMatrix{traj.params, Method::ode, std::move(unit)};
  return out;
}

/// Observables measured straight from the Majorana harmonic:
/// sigma^z_k = -i w_k w_{k+n} and j_k = -2i (w_k w_{k+1} + w_{k+n} w_{k+n+1}).
/// Amplitudes include mu0.
struct DirectObservables {
  std::vector<cplx> magnetization;
  std::vector<cplx> current;
};

inline DirectObservables direct_observables(const HarmonicExtraction& h) {
  const int n = static_cast<int>(h.M.rows()) / 2;
  DirectObservables d;
  for (int k = 0; k < n; ++k) d.magnetization.push_back(-h.M(k, k + n));
  for (int k = 0; k + 1 < n; ++k) d.current.push_back(-2.0 * (h.M(k, k + 1) + h.M(k + n, k + n + 1)));
  return d;
}

/// Convenience: integrate for max(t_end, 40 relaxation times) and extract.
inline HarmonicExtraction solve_ode(const ChainParams& params, OracleOptions opt = {}) {
  const double tau = relaxation_time(params);
  if (std::isfinite(tau)) opt.t_end = std::max(opt.t_end, 40.0 * tau);
  return extract_harmonic(integrate_covariance(params, opt), params.omega);
}

}  // namespace xxdrive
