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

#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "xxdrive/dynamics_oracle.hpp"
#include "xxdrive/observables.hpp"
#include "xxdrive/steady_state_exact.hpp"

using namespace xxdrive;

namespace {

double rel_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a - b).cwiseAbs().maxCoeff() / b.cwiseAbs().maxCoeff();
}

}  // namespace

TEST(Generators, RealAndSparse) {
  const auto g = build_generators({5, 0.3, 1, 1});
  EXPECT_EQ((g.Y.array() != 0.0).count(), 4);
  EXPECT_DOUBLE_EQ(g.X(0, 0), 0.6);
  EXPECT_DOUBLE_EQ(g.X(0, 5 + 1), 2.0);
  EXPECT_DOUBLE_EQ(g.X(5 + 1, 0), -2.0);
}

TEST(Oracle, MatchesSpectral) {
  const ChainParams p{8, 0.1, 1, 3.0};
  const auto h = solve_ode(p);
  EXPECT_LT(rel_diff(h.covariance.data, solve_spectral(p).data), 1e-4);
  EXPECT_LT(h.checkerboard, 1e-6);
  EXPECT_LT(h.periodicity, kPeriodicityTolerance);
}

TEST(Oracle, DcTwoSites) {
  for (double eps : {0.5, 1.0, 2.0}) {
    OracleOptions opt;
    opt.t_end = 200.0;
    const auto h = solve_ode({2, eps, 1, 0.0}, opt);
    EXPECT_NEAR(midpoint_current_abs(h.covariance), 4.0 / (eps + 1.0 / eps), 1e-7);
  }
}

TEST(Oracle, InitialConditionIndependence) {
  const ChainParams p{6, 0.3, 1, 2.0};
  OracleOptions a, b;
  b.initial = InitialCondition::random;
  const auto ha = solve_ode(p, a), hb = solve_ode(p, b);
  EXPECT_LT(rel_diff(hb.covariance.data, ha.covariance.data), 1e-6);
}

TEST(Oracle, LinearInMu0AndZeroDriving) {
  OracleOptions opt;
  const auto h1 = solve_ode({5, 0.4, 1.0, 1.5}, opt);
  const auto h2 = solve_ode({5, 0.4, 2.0, 1.5}, opt);
  EXPECT_LT(rel_diff(h2.raw, 2.0 * h1.raw), 1e-8);
  const auto h0 = solve_ode({5, 0.4, 0.0, 1.5}, opt);
  EXPECT_EQ(h0.raw.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(h0.covariance.data.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Oracle, ClosedChainConservesNorm) {
  ChainParams p{6, 0.0, 1, 2.0};
  OracleOptions opt;
  opt.t_end = 30.0;
  opt.periods = 2;
  opt.tol = 1e-12;
  opt.initial = InitialCondition::random;
  const double n0 = random_antisymmetric(12).norm();
  const auto traj = integrate_covariance(p, opt);
  for (const auto& Z : traj.Z) EXPECT_NEAR(Z.norm(), n0, 1e-9);
  EXPECT_LT(traj.antisymmetry_error, 10 * opt.tol);
}

TEST(Oracle, ShortTimeGrowthBound) {
  ChainParams p{4, 1e-3, 1, 0.7};
  OracleOptions opt;
  opt.t_end = 1.0;
  opt.samples_per_period = 64;
  opt.periods = 2;
  p.omega = 4.0 * std::numbers::pi;  // period 0.5, two periods fit in t_end
  const auto traj = integrate_covariance(p, opt);
  const double ynorm = p.eps * build_generators(p).Y.norm();
  for (std::size_t i = 0; i < traj.Z.size(); ++i) EXPECT_LE(traj.Z[i].norm(), traj.times[i] * ynorm + 1e-12);
}

TEST(Oracle, TransientDetected) {
  OracleOptions opt;
  opt.t_end = 20.0;
  opt.periods = 2;
  opt.initial = InitialCondition::random;
  const ChainParams p{8, 0.01, 1, 3.0};
  EXPECT_THROW(extract_harmonic(integrate_covariance(p, opt), p.omega), TransientError);
}

TEST(Oracle, DirectObservablesMatchConvention) {
  // Observables read straight off the Majorana covariances agree with the
  // amplitude rules applied to the extracted C, and with a brute-force
  // Lindblad calculation on the full 2^n Hilbert space.
  const ChainParams p{4, 0.5, 1, 2.5};
  const auto h = solve_ode(p);
  const auto d = direct_observables(h);
  const auto prof = observable_profile(h.covariance);
  const auto spin = oracle::SpinChain(4).harmonic(0.5, 2.5);
  for (int k = 0; k < 4; ++k) {
    EXPECT_LT(std::abs(d.magnetization[k] - prof.magnetization[k]), 1e-7);
    EXPECT_LT(std::abs(d.magnetization[k] - spin.sigma_z[k]), 1e-7);
  }
  for (int k = 0; k < 3; ++k) {
    EXPECT_LT(std::abs(d.current[k] - prof.current[k]), 1e-7);
    EXPECT_LT(std::abs(d.current[k] - spin.current[k]), 1e-7);
  }
}

TEST(Oracle, RejectsLooseTolerance) {
  OracleOptions opt;
  opt.tol = 1e-6;
  EXPECT_THROW(integrate_covariance({4, 0.1, 1, 1}, opt), ParameterError);
}
