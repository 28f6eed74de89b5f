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

#include <memory>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "relent/spectra.hpp"

namespace relent {

inline constexpr double kTraceTolerance = 1e-10;
/// Eigenvalues in [-kClampTolerance, 0) are clamped to zero.
inline constexpr double kClampTolerance = 1e-10;
/// Eigenvalues at or below this value are treated as exact zeros.
inline constexpr double kEigenvalueCutoff = 1e-14;
/// Threshold on rho eigenvalues and overlaps used to decide support violations.
inline constexpr double kSupportTolerance = 1e-10;

/// Hermitian, positive semi-definite, unit-trace matrix.
///
/// The eigensystem is computed once at construction (it is needed to validate
/// positivity) and shared between copies. factor_dims, when non-empty, gives
/// the tensor-product structure used by partial_trace.
class DensityMatrix {
 public:
  explicit DensityMatrix(const Matrix& entries, std::vector<Index> factor_dims = {});

  static DensityMatrix maximally_mixed(Index dim);
  static DensityMatrix basis_state(Index dim, Index k);
  static DensityMatrix pure(const CVector& psi);
  static DensityMatrix diagonal(std::span<const double> probabilities);

  Index dim() const { return entries_.rows(); }
  const Matrix& matrix() const { return entries_; }
  const std::vector<Index>& factor_dims() const { return factor_dims_; }
  bool has_factorization() const { return !factor_dims_.empty(); }
  const Eigensystem& spectrum() const { return *spectrum_; }

  /// Same entries with a new tensor factorization (product must equal dim).
  DensityMatrix with_factors(std::vector<Index> factor_dims) const;

 private:
  Matrix entries_;
  std::vector<Index> factor_dims_;
  std::shared_ptr<const Eigensystem> spectrum_;
};

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

/// Reduce onto the factors listed in keep (indices into factor_dims, any
/// order; the result keeps the original factor ordering).
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const Index> keep);

/// -sum p ln p over eigenvalues above kEigenvalueCutoff, in nats.
double von_neumann_entropy(const DensityMatrix& rho);

/// Tr{rho (ln rho - ln sigma)} in nats; +infinity on a support violation.
double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma);

double expectation(const DensityMatrix& rho, const HermitianOperator& observable);
double expectation(const DensityMatrix& rho, const Matrix& observable);

/// (1/2) ||rho - sigma||_1.
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Matrix schema {"rows", "cols", "re", "im"} with flat row-major re/im arrays.
/// "rows"/"cols" may be omitted for square matrices.
nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j);

/// {"dim", "factor_dims", "re", "im"}.
nlohmann::json to_json(const DensityMatrix& rho);
DensityMatrix density_matrix_from_json(const nlohmann::json& j);

}  // namespace relent
