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

// Reference implementations used only by the tests. None of them call into
// the library's solvers.

#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using cplx = std::complex<double>;

// Two sites: C = alpha 1 + beta J solves the stationary equation with
// c = 2 i eps - omega/2, beta = 4 eps / (c^2 - 4), alpha = -c beta / 2.
struct TwoSite {
  cplx alpha, beta;
};

inline TwoSite two_site(double eps, double omega) {
  const cplx c(-0.5 * omega, 2.0 * eps);
  const cplx beta = 4.0 * eps / (c * c - 4.0);
  return {-0.5 * c * beta, beta};
}

// First-order sum written out naively, all (p, m) pairs, no parity split.
inline cplx weak_naive(int n, double eps, double omega, int j, int k) {
  const double pi = std::numbers::pi;
  auto lam = [&](int m) {
    const double a = pi * m / (n + 1);
    return cplx(0.5 * omega - 4.0 * std::cos(a), -8.0 * eps / (n + 1) * std::sin(a) * std::sin(a));
  };
  cplx s = 0.0;
  for (int p = 1; p <= n; ++p)
    for (int m = 1; m <= n; ++m) {
      if ((p + m - n) % 2 != 0) continue;
      const double ap = pi * p / (n + 1), am = pi * m / (n + 1);
      s += std::sin(ap) * std::sin(am) * std::sin(ap * j) * std::sin(am * k) / (lam(p) + lam(m));
    }
  return 32.0 * eps / double((n + 1) * (n + 1)) * s;
}

// Brute force on the 2^n-dimensional Hilbert space. H = sum sx sx + sy sy,
// baths L = sqrt(eps(1 +- mu)) s+- on site 1 and sqrt(eps(1 -+ mu)) s+- on
// site n, dissipator 2 L rho L^+ - {L^+ L, rho}. The Liouvillian is
// L0 + mu(t) L1 and rho0 = 1/2^n is stationary for L0, so the first harmonic
// x of rho(t) = rho0 + Re(e^{i omega t} x) + O(mu0^2) solves
// (i omega - L0) x = mu0 L1 rho0 (with tr x = 0 at omega = 0).
struct SpinHarmonic {
  std::vector<cplx> sigma_z;  // <sigma^z_k>, k = 1..n
  std::vector<cplx> current;  // <j_k>, j_k = 2 (sx_k sy_{k+1} - sy_k sx_{k+1})
};

class SpinChain {
 public:
  using Mat = Eigen::MatrixXcd;

  explicit SpinChain(int n) : n_(n), dim_(1 << n) {}

  Mat site_op(const Mat& op, int site) const {  // site is 1-based
    Mat out = Mat::Identity(1, 1);
    for (int s = 1; s <= n_; ++s) {
      const Mat f = (s == site) ? op : Mat(Mat::Identity(2, 2));
      Mat next(out.rows() * 2, out.cols() * 2);
      for (int i = 0; i < out.rows(); ++i)
        for (int j = 0; j < out.cols(); ++j) next.block(2 * i, 2 * j, 2, 2) = out(i, j) * f;
      out = next;
    }
    return out;
  }

  static Mat sx() { Mat m(2, 2); m << 0, 1, 1, 0; return m; }
  static Mat sy() { Mat m(2, 2); m << 0, cplx(0, -1), cplx(0, 1), 0; return m; }
  static Mat sz() { Mat m(2, 2); m << 1, 0, 0, -1; return m; }
  static Mat sp() { Mat m(2, 2); m << 0, 1, 0, 0; return m; }
  static Mat sm() { Mat m(2, 2); m << 0, 0, 1, 0; return m; }

  // vec(A X B) = (B^T kron A) vec(X), column-major vec.
  Mat left_right(const Mat& A, const Mat& B) const {
    const Mat Bt = B.transpose();
    Mat out(dim_ * dim_, dim_ * dim_);
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) out.block(i * dim_, j * dim_, dim_, dim_) = Bt(i, j) * A;
    return out;
  }

  Mat dissipator(const Mat& L) const {
    const Mat I = Mat::Identity(dim_, dim_);
    const Mat LdL = L.adjoint() * L;
    return 2.0 * left_right(L, L.adjoint()) - left_right(LdL, I) - left_right(I, LdL);
  }

  SpinHarmonic harmonic(double eps, double omega, double mu0 = 1.0) const {
    const Mat I = Mat::Identity(dim_, dim_);
    Mat H = Mat::Zero(dim_, dim_);
    for (int k = 1; k < n_; ++k)
      H += site_op(sx(), k) * site_op(sx(), k + 1) + site_op(sy(), k) * site_op(sy(), k + 1);
    const cplx mi(0.0, -1.0);
    Mat L0 = mi * (left_right(H, I) - left_right(I, H));
    const Mat Dp1 = dissipator(site_op(sp(), 1)), Dm1 = dissipator(site_op(sm(), 1));
    const Mat Dpn = dissipator(site_op(sp(), n_)), Dmn = dissipator(site_op(sm(), n_));
    L0 += eps * (Dp1 + Dm1 + Dpn + Dmn);
    const Mat L1 = eps * (Dp1 - Dm1 - Dpn + Dmn);
    const Eigen::VectorXcd rho0 = Eigen::Map<const Eigen::VectorXcd>(Mat(I / double(dim_)).data(), dim_ * dim_);
    const Eigen::VectorXcd rhs = mu0 * (L1 * rho0);
    Eigen::VectorXcd x;
    if (omega > 0.0) {
      Mat K = -L0;
      K.diagonal().array() += cplx(0.0, omega);
      x = K.partialPivLu().solve(rhs);
    } else {
      Mat K(dim_ * dim_ + 1, dim_ * dim_);
      K.topRows(dim_ * dim_) = -L0;
      K.row(dim_ * dim_).setZero();
      for (int i = 0; i < dim_; ++i) K(dim_ * dim_, i * dim_ + i) = 1.0;
      Eigen::VectorXcd b = Eigen::VectorXcd::Zero(dim_ * dim_ + 1);
      b.head(dim_ * dim_) = rhs;
      x = K.colPivHouseholderQr().solve(b);
    }
    const Mat X = Eigen::Map<const Mat>(x.data(), dim_, dim_);
    SpinHarmonic out;
    for (int k = 1; k <= n_; ++k) out.sigma_z.push_back((site_op(sz(), k) * X).trace());
    for (int k = 1; k < n_; ++k) {
      const Mat j = 2.0 * (site_op(sx(), k) * site_op(sy(), k + 1) - site_op(sy(), k) * site_op(sx(), k + 1));
      out.current.push_back((j * X).trace());
    }
    return out;
  }

 private:
  int n_;
  int dim_;
};

}  // namespace oracle
