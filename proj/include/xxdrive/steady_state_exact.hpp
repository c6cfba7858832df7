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

// Exact (non-perturbative in eps) solution of the stationary equation
//
//     A C + C A = -4 eps S,    A = 2 (J + i eps R) - (omega/2) 1,
//
// for the n x n amplitude matrix C of the oscillating steady state.

#pragma once

#include <cmath>
#include <string>
#include <string_view>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "xxdrive/chain_model.hpp"
#include "xxdrive/errors.hpp"

namespace xxdrive {

enum class Method { dense, spectral, schur, weak, series, greens, ode };

inline std::string_view to_string(Method m) {
  switch (m) {
    case Method::dense: return "dense";
    case Method::spectral: return "spectral";
    case Method::schur: return "schur";
    case Method::weak: return "weak";
    case Method::series: return "series";
    case Method::greens: return "greens";
    case Method::ode: return "ode";
  }
  return "unknown";
}

inline Method parse_method(std::string_view s) {
  for (Method m : {Method::dense, Method::spectral, Method::schur, Method::weak, Method::series, Method::greens,
                   Method::ode})
    if (to_string(m) == s) return m;
  throw ParameterError("unknown method '" + std::string(s) + "'");
}

/// Amplitude matrix C of all non-vanishing oscillating two-point functions,
/// computed at unit driving amplitude.
struct CovarianceMatrix {
  ChainParams params;
  Method method = Method::spectral;
  Eigen::MatrixXcd data;

  int n() const { return static_cast<int>(data.rows()); }
  cplx operator()(int j, int k) const { return data(j - 1, k - 1); }  // 1-based sites
};

struct SylvesterSystem {
  Eigen::MatrixXcd A;
  Eigen::MatrixXcd source;  ///< -4 eps S
};

inline SylvesterSystem build_sylvester_system(const ChainParams& params) {
  params.validate();
  const auto lat = build_static_matrices(params);
  SylvesterSystem sys;
  sys.A = (2.0 * lat.J).cast<cplx>() + cplx(0.0, 2.0 * params.eps) * lat.R.cast<cplx>();
  sys.A.diagonal().array() -= 0.5 * params.omega;
  sys.source = (-4.0 * params.eps * lat.S).cast<cplx>();
  return sys;
}

/// ||A C + C A + 4 eps S||_max / ||4 eps S||_max.
inline double residual_norm(const Eigen::MatrixXcd& C, const ChainParams& params) {
  const auto sys = build_sylvester_system(params);
  detail::require(C.rows() == params.n && C.cols() == params.n, "residual_norm: size mismatch");
  const Eigen::MatrixXcd r = sys.A * C + C * sys.A - sys.source;
  return r.cwiseAbs().maxCoeff() / sys.source.cwiseAbs().maxCoeff();
}

inline double residual_norm(const CovarianceMatrix& C, const ChainParams& params) {
  return residual_norm(C.data, params);
}

inline constexpr int kDenseMaxSize = 64;

/// Brute force: flatten to the n^2 x n^2 system (1 (x) A + A^T (x) 1) vec C.
inline CovarianceMatrix solve_dense(const ChainParams& params) {
  params.validate();
  const int n = params.n;
  if (n > kDenseMaxSize)
    throw SizeGuardError("solve_dense: n = " + std::to_string(n) + " exceeds cap " +
                         std::to_string(kDenseMaxSize) + " (O(n^6) work)");
  const auto sys = build_sylvester_system(params);
  const int N = n * n;
  Eigen::MatrixXcd K = Eigen::MatrixXcd::Zero(N, N);
  // vec is column-major: index(j, k) = j + n k.
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) {
        K(j + n * k, l + n * k) += sys.A(j, l);  // (A C)_{jk} = A_{jl} C_{lk}
        K(j + n * k, j + n * l) += sys.A(l, k);  // (C A)_{jk} = C_{jl} A_{lk}
      }
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(K);
  const double rcond = lu.rcond();
  if (!(rcond > 1e-14))
    throw SingularSystemError("solve_dense: flattened Sylvester operator is singular (rcond = " +
                              std::to_string(rcond) + ") at omega = " +
                              std::to_string(params.omega));
  const Eigen::VectorXcd rhs = Eigen::Map<const Eigen::VectorXcd>(sys.source.data(), N);
  Eigen::VectorXcd x = lu.solve(rhs);
  CovarianceMatrix out{params, Method::dense, Eigen::Map<Eigen::MatrixXcd>(x.data(), n, n)};
  return out;
}

struct SpectralReport {
  double condition = 0.0;   ///< 1-norm condition number of the eigenvector matrix
  int refinements = 0;      ///< iterative-refinement sweeps applied
  double residual = 0.0;    ///< final residual_norm
  bool nudged = false;      ///< omega shifted off an exceptional point
  bool dense_fallback = false;  ///< spectral route abandoned for dense/Schur
};

inline constexpr double kDefectiveCondition = 1e8;

/// Eigen-decomposition route. A is complex symmetric (not Hermitian), so its
/// right eigenvectors are transpose-orthogonal and, scaled to psi^T psi = 1,
/// V^{-1} = V^T up to rounding. Expanding C = V X V^T turns the equation into
/// X_jk = (V^{-1} F V^{-T})_jk / (b_j + b_k). A few refinement sweeps on the
/// residual recover full accuracy near resonances.
inline CovarianceMatrix solve_spectral(const ChainParams& params, SpectralReport* report = nullptr) {
  params.validate();
  const int n = params.n;
  const auto sys = build_sylvester_system(params);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(sys.A, true);
  if (es.info() != Eigen::Success) throw SolverError("solve_spectral: eigensolver failed");
  Eigen::MatrixXcd V = es.eigenvectors();
  const Eigen::VectorXcd b = es.eigenvalues();
  for (int j = 0; j < n; ++j) {
    const cplx t = V.col(j).transpose() * V.col(j);
    if (std::abs(t) < 1e-300)
      throw DefectiveMatrixError("solve_spectral: self-orthogonal eigenvector (exceptional point)");
    V.col(j) /= std::sqrt(t);
  }
  const Eigen::MatrixXcd Vt = V.transpose();
  // Transpose-orthogonality holds only to rounding; project with the exact
  // inverse so refinement converges even when V^T V drifts from 1.
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(V);
  const Eigen::MatrixXcd Vinv = lu.inverse();
  auto norm1 = [](const Eigen::MatrixXcd& M) { return M.cwiseAbs().colwise().sum().maxCoeff(); };
  const double cond = norm1(V) * norm1(Vinv);
  if (report) report->condition = cond;
  if (!(cond < kDefectiveCondition))
    throw DefectiveMatrixError("solve_spectral: eigenvector condition number " + std::to_string(cond) +
                               " exceeds 1e8 (near an exceptional point)");
  Eigen::MatrixXcd denom(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) denom(j, k) = b[j] + b[k];
  if ((denom.cwiseAbs().array() == 0.0).any())
    throw SingularSystemError("solve_spectral: b_j + b_k = 0 for some pair");

  auto apply_inverse = [&](const Eigen::MatrixXcd& F) {
    // A = V B V^{-1} and A^T = A give C = V X V^T with B X + X B = V^{-1} F V^{-T}.
    Eigen::MatrixXcd X = Vinv * F * Vinv.transpose();
    X.array() /= denom.array();
    return Eigen::MatrixXcd(V * X * Vt);
  };

  Eigen::MatrixXcd C = apply_inverse(sys.source);
  C = 0.5 * (C + C.transpose()).eval();
  const double scale = sys.source.cwiseAbs().maxCoeff();
  double res = 0.0;
  int sweeps = 0;
  for (; sweeps <= 4; ++sweeps) {
    const Eigen::MatrixXcd r = sys.source - (sys.A * C + C * sys.A);
    res = r.cwiseAbs().maxCoeff() / scale;
    if (res < 1e-14 || sweeps == 4) break;
    C += apply_inverse(r);
    C = 0.5 * (C + C.transpose()).eval();
  }
  if (report) {
    report->refinements = sweeps;
    report->residual = res;
  }
  return {params, Method::spectral, std::move(C)};
}

/// Bartels-Stewart on the complex Schur form A = U T U^H. With Y = U^H C U the
/// equation becomes T Y + Y T = U^H F U, solved one column at a time by
/// triangular back-substitution. No eigenvectors involved, so it is immune
/// to exceptional points; used as the fallback and as an audit solver.
inline CovarianceMatrix solve_schur(const ChainParams& params) {
  params.validate();
  const int n = params.n;
  const auto sys = build_sylvester_system(params);
  Eigen::ComplexSchur<Eigen::MatrixXcd> schur(sys.A);
  if (schur.info() != Eigen::Success) throw SolverError("solve_schur: Schur decomposition failed");
  const Eigen::MatrixXcd& U = schur.matrixU();
  const Eigen::MatrixXcd& T = schur.matrixT();
  const Eigen::MatrixXcd G = U.adjoint() * sys.source * U;
  Eigen::MatrixXcd Y(n, n);
  for (int k = 0; k < n; ++k) {
    Eigen::VectorXcd rhs = G.col(k);
    if (k > 0) rhs.noalias() -= Y.leftCols(k) * T.col(k).head(k);
    Eigen::MatrixXcd M = T;
    M.diagonal().array() += T(k, k);
    if ((M.diagonal().cwiseAbs().array() == 0.0).any())
      throw SingularSystemError("solve_schur: t_jj + t_kk = 0 for some pair");
    Y.col(k) = M.triangularView<Eigen::Upper>().solve(rhs);
  }
  Eigen::MatrixXcd C = U * Y * U.adjoint();
  C = 0.5 * (C + C.transpose()).eval();
  return {params, Method::schur, std::move(C)};
}

/// Exact solve with the exceptional-point policy: on a defective eigenvector
/// matrix, nudge omega by 1e-12 and retry; if that also fails, fall back to
/// the dense solver (n <= 64) or the Schur solver.
inline CovarianceMatrix solve_exact(const ChainParams& params, SpectralReport* report = nullptr) {
  try {
    return solve_spectral(params, report);
  } catch (const DefectiveMatrixError&) {
    if (report) report->nudged = true;
    try {
      auto out = solve_spectral(params.with_omega(params.omega + 1e-12), report);
      out.params = params;
      return out;
    } catch (const DefectiveMatrixError&) {
      if (report) report->dense_fallback = true;
      if (params.n <= kDenseMaxSize) return solve_dense(params);
      return solve_schur(params);
    }
  }
}

/// Eigenvalues of A (b_j); at eps -> 0 they approach -(omega/2 - 4 cos a_j).
inline Eigen::VectorXcd sylvester_eigenvalues(const ChainParams& params) {
  const auto sys = build_sylvester_system(params);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(sys.A, false);
  return es.eigenvalues();
}

}  // namespace xxdrive
