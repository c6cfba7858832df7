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

#pragma once

#include <stdexcept>
#include <string>

namespace xxdrive {

/// Invalid model parameters or arguments (maps to CLI exit code 1).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical method could not produce a trustworthy result (CLI exit code 2).
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The flattened Sylvester operator is numerically rank-deficient.
class SingularSystemError : public SolverError {
 public:
  using SolverError::SolverError;
};

/// Eigenvector matrix too ill-conditioned (near an exceptional point).
class DefectiveMatrixError : public SolverError {
 public:
  using SolverError::SolverError;
};

/// Problem size exceeds the documented cost/memory cap of a method.
class SizeGuardError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

/// Series or sum outside its region of convergence.
class DivergenceError : public SolverError {
 public:
  using SolverError::SolverError;
};

/// Time integration failed (step size underflow).
class StiffnessError : public SolverError {
 public:
  using SolverError::SolverError;
};

/// Trajectory did not reach the periodic state before harmonic extraction.
class TransientError : public SolverError {
 public:
  using SolverError::SolverError;
};

namespace detail {

inline void require(bool condition, const std::string& message) {
  if (!condition) throw ParameterError(message);
}

}  // namespace detail
}  // namespace xxdrive
