// Copyright 2026 The relent Authors
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

#include <functional>
#include <span>

#include "relent/types.hpp"

namespace relent {

/// Maximum absolute element deviation from Hermiticity tolerated on input.
inline constexpr double kHermiticityTolerance = 1e-12;

/// A dim x dim complex matrix that equals its conjugate transpose.
///
/// Construction validates the invariant within kHermiticityTolerance and
/// stores the exactly Hermitian part (M + M^dagger) / 2.
class HermitianOperator {
 public:
  explicit HermitianOperator(const Matrix& entries);

  static HermitianOperator identity(Index dim);
  static HermitianOperator diagonal(std::span<const double> values);

  Index dim() const { return entries_.rows(); }
  const Matrix& matrix() const { return entries_; }

 private:
  Matrix entries_;
};

/// Location and size of the largest |M - M^dagger| entry.
struct HermiticityDefect {
  double deviation = 0.0;
  Index row = 0;
  Index col = 0;
};

HermiticityDefect hermiticity_defect(const Matrix& m);

/// Eigenvalues in ascending order with the matching unitary eigenvector matrix
/// (eigenvectors in columns).
struct Eigensystem {
  RVector values;
  Matrix vectors;

  Index dim() const { return values.size(); }
  Matrix reconstruct() const;
};

/// Full Hermitian eigendecomposition.
Eigensystem eigh(const HermitianOperator& h);

/// As above for a raw matrix; rejects input that is not Hermitian within
/// kHermiticityTolerance.
Eigensystem eigh(const Matrix& h);

/// V diag(f(lambda)) V^dagger from a precomputed eigensystem. Throws
/// PreconditionError naming the eigenvalue if f is not finite there.
Matrix apply_spectral(const Eigensystem& eig, const std::function<double(double)>& f);

/// f(H) through the spectral decomposition of H.
HermitianOperator matrix_fn(const HermitianOperator& h, const std::function<double(double)>& f);

/// Schatten-1 norm of a Hermitian matrix (sum of |eigenvalues|).
double trace_norm(const Matrix& hermitian);

/// Frobenius norm of [a, b].
double commutator_norm(const Matrix& a, const Matrix& b);

}  // namespace relent
