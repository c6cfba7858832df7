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

#include "xxdrive/chain_model.hpp"

using namespace xxdrive;

TEST(ChainParams, RejectsInvalid) {
  EXPECT_THROW((ChainParams{1, 0.1, 1, 0}.validate()), ParameterError);
  EXPECT_THROW((ChainParams{4, 0.0, 1, 0}.validate()), ParameterError);
  EXPECT_THROW((ChainParams{4, 0.1, 1, -1}.validate()), ParameterError);
  EXPECT_NO_THROW((ChainParams{2, 0.1, 0.0, 0}.validate()));
}

TEST(StaticMatrices, TwoSitesSourceIsIdentity) {
  const auto m = build_static_matrices({2, 0.1, 1, 0});
  EXPECT_TRUE(m.S.isApprox(Eigen::MatrixXd::Identity(2, 2)));
}

TEST(StaticMatrices, OddChainSourceEqualsP) {
  const auto m = build_static_matrices({3, 0.1, 1, 0});
  Eigen::MatrixXd P = Eigen::Vector3d(1, 0, -1).asDiagonal();
  EXPECT_EQ(m.S, P);
  EXPECT_EQ(m.O * m.P, m.P);
}

TEST(StaticMatrices, EvenChainSourceEqualsR) {
  const auto m = build_static_matrices({4, 0.1, 1, 0});
  EXPECT_EQ(m.O * m.P, m.R);
  EXPECT_EQ(m.S, m.O * m.P);
}

TEST(StaticMatrices, EntriesAndSparsity) {
  for (int n : {2, 5, 10}) {
    const auto m = build_static_matrices({n, 0.1, 1, 0});
    EXPECT_EQ((m.J.array() != 0.0).count(), 2 * (n - 1));
    for (const auto* M : {&m.J, &m.R, &m.P, &m.O, &m.S})
      for (int i = 0; i < n * n; ++i) {
        const double v = M->data()[i];
        EXPECT_TRUE(v == 0.0 || v == 1.0 || v == -1.0);
      }
    EXPECT_EQ(m.S(n - 1, n - 1), parity_sign(n));
  }
}

TEST(ModeEnergies, ClosedForms) {
  const auto s3 = mode_energies(3, 0.1, 0);
  EXPECT_NEAR(s3.energies[0], 2.0 * std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(s3.energies[1], 0.0, 1e-14);
  EXPECT_NEAR(s3.energies[2], -2.0 * std::sqrt(2.0), 1e-14);
  const auto s2 = mode_energies(2, 0.1, 0);
  EXPECT_NEAR(s2.energies[0], 2.0, 1e-14);
  EXPECT_NEAR(s2.energies[1], -2.0, 1e-14);
  EXPECT_THROW(mode_energies(1, 0.1, 0), ParameterError);
}

TEST(ModeEnergies, DissipativeShiftAndSymmetry) {
  const int n = 257;
  const auto s = mode_energies(n, 0.1, 8.0);
  for (int m = 0; m < n; ++m) {
    EXPECT_LT(s.lambda[m].imag(), 0.0);
    EXPECT_NEAR(s.lambda[m].imag(), -(0.8 / 258) * std::pow(std::sin(s.a[m]), 2), 1e-15);
    EXPECT_NEAR(s.energies[m] + s.energies[n - 1 - m], 0.0, 1e-13);
    if (m > 0) EXPECT_LT(s.energies[m], s.energies[m - 1]);
  }
}

TEST(Resonances, PaperValuesAtN257) {
  const auto table = resonance_frequencies({257, 0.01, 1, 0});
  const auto* r56 = table.find(5, 6);
  const auto* r29 = table.find(2, 9);
  const auto* r67 = table.find(6, 7);
  ASSERT_TRUE(r56 && r29 && r67);
  EXPECT_NEAR(r56->omega, 7.98192, 5e-6);
  EXPECT_NEAR(r29->omega, 7.97482, 5e-6);
  EXPECT_NEAR(r67->omega, 7.97481, 5e-6);
  EXPECT_DOUBLE_EQ(table.width_scale, 0.01 / 257);
}

TEST(Resonances, ThreeSites) {
  const auto all = resonance_frequencies({3, 0.1, 1, 0}, FrequencySign::all);
  ASSERT_EQ(all.entries.size(), 2u);
  EXPECT_NEAR(all.entries[0].omega, -2.0 * std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(all.entries[1].omega, 2.0 * std::sqrt(2.0), 1e-14);
  const auto pos = resonance_frequencies({3, 0.1, 1, 0});
  ASSERT_EQ(pos.entries.size(), 1u);
  EXPECT_EQ(pos.entries[0].p, 1);
  EXPECT_EQ(pos.entries[0].m, 2);
}

TEST(Resonances, InvariantsAndLazyWindow) {
  const ChainParams p{40, 0.1, 1, 0};
  const auto table = resonance_frequencies(p);
  for (const auto& r : table.entries) {
    EXPECT_EQ((r.p + r.m - p.n) % 2, 0);
    EXPECT_GT(r.omega, 0.0);
    EXPECT_LT(r.omega, kCriticalFrequency);
    EXPECT_DOUBLE_EQ(r.omega, mode_energy(p.n, r.m) + mode_energy(p.n, r.p));
  }
  const auto window = resonances_near(p, 5.0, 0.3);
  std::size_t expected = 0;
  for (const auto& r : table.entries) expected += std::abs(r.omega - 5.0) <= 0.3;
  EXPECT_EQ(window.entries.size(), expected);
  EXPECT_THROW(resonance_frequencies({20000, 0.1, 1, 0}), SizeGuardError);
}
