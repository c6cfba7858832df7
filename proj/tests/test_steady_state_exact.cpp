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

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "xxdrive/steady_state_exact.hpp"
#include "xxdrive/weak_coupling.hpp"

using namespace xxdrive;

namespace {

double max_abs(const Eigen::MatrixXcd& M) { return M.cwiseAbs().maxCoeff(); }

double mirror_defect(const Eigen::MatrixXcd& C) {
  const int n = static_cast<int>(C.rows());
  double d = 0.0;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) d = std::max(d, std::abs(C(n - 1 - j, n - 1 - k) - parity_sign(n) * C(j, k)));
  return d;
}

}  // namespace

TEST(TwoSite, ClosedFormAllSolvers) {
  for (double w : {0.0, 1.0, 3.3, 8.0, 12.0})
    for (double eps : {1e-3, 0.1, 1.0, 10.0}) {
      const ChainParams p{2, eps, 1, w};
      const auto ref = oracle::two_site(eps, w);
      for (const auto& C : {solve_dense(p), solve_spectral(p), solve_schur(p)}) {
        const double s = std::abs(ref.beta) + std::abs(ref.alpha);
        EXPECT_LT(std::abs(C(1, 2) - ref.beta), 1e-12 * s) << "w=" << w << " eps=" << eps;
        EXPECT_LT(std::abs(C(1, 1) - ref.alpha), 1e-12 * s);
        EXPECT_LT(std::abs(C(2, 2) - ref.alpha), 1e-12 * s);
      }
    }
}

TEST(TwoSite, DerivedValueAtOmega8) {
  const auto C = solve_spectral({2, 0.1, 1, 8.0});
  EXPECT_NEAR(C(1, 2).real(), 0.0328568, 2e-7);
  EXPECT_NEAR(C(1, 2).imag(), 0.0043956, 2e-7);
  const cplx expected = 0.4 / cplx(11.96, -1.6);
  EXPECT_LT(std::abs(C(1, 2) - expected), 1e-15);
}

TEST(TwoSite, DcMagnitude) {
  for (double eps : {0.1, 1.0, 10.0}) {
    const auto C = solve_spectral({2, eps, 1, 0.0});
    EXPECT_NEAR(4.0 * std::abs(C(1, 2)), 4.0 / (eps + 1.0 / eps), 1e-13);
  }
}

TEST(Residual, ZeroGuessIsOne) {
  const ChainParams p{7, 0.3, 1, 2.0};
  EXPECT_DOUBLE_EQ(residual_norm(Eigen::MatrixXcd::Zero(7, 7), p), 1.0);
}

TEST(Residual, WeakCouplingIsOrderEps) {
  const ChainParams p{12, 1e-3, 1, 6.163};
  const double r = residual_norm(covariance_matrix_weak(p), p);
  EXPECT_GT(r, 1e-5);
  EXPECT_LT(r, 1e-2);
}

TEST(Residual, SizeMismatchRejected) {
  EXPECT_THROW(residual_norm(Eigen::MatrixXcd::Zero(3, 3), ChainParams{4, 0.1, 1, 1}), ParameterError);
}

// Dense flattening is the brute-force oracle for both fast routes.
TEST(OracleEquivalence, DenseSpectralSchurGrid) {
  for (int n : {3, 6, 12})
    for (double w : {0.0, 1.0, 6.163, 8.0, 8.1, 12.0})
      for (double eps : {1e-3, 0.1, 1.0}) {
        const ChainParams p{n, eps, 1, w};
        const auto d = solve_dense(p);
        const auto s = solve_spectral(p);
        const auto c = solve_schur(p);
        EXPECT_LT(max_abs(d.data - s.data), 1e-10) << n << " " << w << " " << eps;
        EXPECT_LT(max_abs(d.data - c.data), 1e-10) << n << " " << w << " " << eps;
        EXPECT_LT(residual_norm(d, p), 1e-10);
        EXPECT_LT(residual_norm(s, p), 1e-10);
      }
}

TEST(Structure, SymmetryAndMirrorParity) {
  for (int n : {5, 8, 33})
    for (double w : {0.5, 4.0, 9.0}) {
      const ChainParams p{n, 0.2, 1, w};
      for (const auto& C : {solve_spectral(p), solve_schur(p), covariance_matrix_weak(p)}) {
        const double scale = max_abs(C.data);
        EXPECT_LT(max_abs(C.data - C.data.transpose()), 1e-10 * scale);
        EXPECT_LT(mirror_defect(C.data), 1e-9 * scale);
      }
    }
}

TEST(Structure, LinearInSmallEps) {
  const ChainParams p{10, 1e-4, 1, 2.5};
  const auto c1 = solve_spectral(p);
  const auto c2 = solve_spectral({10, 2e-4, 1, 2.5});
  const double rel = max_abs(c2.data - 2.0 * c1.data) / max_abs(c1.data);
  EXPECT_LT(rel, 1e-2);
}

TEST(Structure, VanishingSourceGivesVanishingC) {
  const auto C = solve_spectral({9, 1e-14, 1, 3.0});
  EXPECT_LT(max_abs(C.data), 1e-11);
}

TEST(Spectrum, EigenvaluesApproachFreeModes) {
  const int n = 16;
  const double w = 5.0;
  auto b = sylvester_eigenvalues({n, 1e-9, 1, w});
  std::vector<double> got, want;
  for (int j = 0; j < n; ++j) got.push_back(b[j].real());
  for (int j = 1; j <= n; ++j) want.push_back(-(0.5 * w - mode_energy(n, j)));
  std::sort(got.begin(), got.end());
  std::sort(want.begin(), want.end());
  for (int j = 0; j < n; ++j) EXPECT_NEAR(got[j], want[j], 1e-8);
}

TEST(Spectral, ReportAndGuards) {
  SpectralReport rep;
  const ChainParams p{64, 0.1, 1, 8.0};
  const auto C = solve_exact(p, &rep);
  EXPECT_LT(rep.residual, 1e-12);
  EXPECT_LT(rep.condition, kDefectiveCondition);
  EXPECT_FALSE(rep.nudged);
  EXPECT_EQ(C.method, Method::spectral);
  EXPECT_THROW(solve_dense({65, 0.1, 1, 1}), SizeGuardError);
  EXPECT_THROW(solve_spectral({1, 0.1, 1, 1}), ParameterError);
}

TEST(Methods, ParseRoundTrip) {
  for (Method m : {Method::dense, Method::spectral, Method::schur, Method::weak, Method::series, Method::greens,
                   Method::ode})
    EXPECT_EQ(parse_method(to_string(m)), m);
  EXPECT_THROW(parse_method("bogus"), ParameterError);
}
