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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "relent/rng.hpp"
#include "relent/states.hpp"

namespace relent {

/// Pass threshold applied to every residual of a ChannelReport.
inline constexpr double kChannelPassThreshold = 1e-8;
/// Trace-preservation and CP tolerance enforced when a channel is constructed.
inline constexpr double kChannelTolerance = 1e-10;
/// Promised fixed points are checked to this trace-norm residual.
inline constexpr double kSteadyStateTolerance = 1e-10;

using KrausSet = std::vector<Matrix>;

/// Diagnostics of a Kraus set. Residuals are >= 0 except completely_positive,
/// which is the smallest Choi eigenvalue.
struct ChannelReport {
  double trace_preserving = 0.0;     ///< max |sum A^dagger A - 1|
  double completely_positive = 0.0;  ///< min eigenvalue of the Choi matrix
  double unital = 0.0;               ///< ||N(1/d_in) - 1/d_out||_1
  std::optional<double> fixed_point; ///< ||N(sigma) - sigma||_1 when sigma given

  bool trace_preserving_ok(double tol = kChannelPassThreshold) const { return trace_preserving <= tol; }
  bool completely_positive_ok(double tol = kChannelPassThreshold) const { return completely_positive >= -tol; }
  bool unital_ok(double tol = kChannelPassThreshold) const { return unital <= tol; }
  bool fixed_point_ok(double tol = kChannelPassThreshold) const { return fixed_point && *fixed_point <= tol; }
  /// CPTP contract (and fixed point, if one was checked).
  bool passes(double tol = kChannelPassThreshold) const;
};

/// Choi matrix sum_ij |i><j| (x) N(|i><j|), of size (d_in d_out)^2.
Matrix choi_matrix(const KrausSet& kraus);

/// Works on any Kraus list, including ones that are not trace preserving.
ChannelReport verify(const KrausSet& kraus, const DensityMatrix* fixed_point = nullptr);

/// CPTP map in Kraus form, rho -> sum A rho A^dagger. The constructor rejects
/// Kraus lists that break trace preservation or complete positivity beyond
/// kChannelTolerance.
class QuantumChannel {
 public:
  QuantumChannel(KrausSet kraus, std::string label);

  Index dim_in() const { return kraus_.front().cols(); }
  Index dim_out() const { return kraus_.front().rows(); }
  const KrausSet& kraus() const { return kraus_; }
  const std::string& label() const { return label_; }

  /// Raw application on a matrix; no validation of the output.
  Matrix apply_raw(const Matrix& rho) const;

  ChannelReport verify(const DensityMatrix* fixed_point = nullptr) const;

 private:
  KrausSet kraus_;
  std::string label_;
};

/// N(rho). Keeps rho's factorization when the channel is square.
DensityMatrix apply(const QuantumChannel& channel, const DensityMatrix& rho);

/// Applies a channel acting on the contiguous block of factors starting at
/// first_factor (the channel dimension must equal the product of the covered
/// factor dims). Equivalent to apply(embed(...), rho) without forming the
/// full Kraus operators.
Matrix apply_local_raw(const QuantumChannel& channel, const Matrix& rho, std::span<const Index> factor_dims,
                       Index first_factor);
DensityMatrix apply_local(const QuantumChannel& channel, const DensityMatrix& rho, Index first_factor);

/// ||N(sigma) - sigma||_1.
double fixed_point_residual(const QuantumChannel& channel, const DensityMatrix& sigma);

// Constructors. Each result passes verify(); promised steady states are
// checked at construction and a PreconditionError is thrown otherwise.

QuantumChannel identity_channel(Index dim);
/// U must be unitary within 1e-10.
QuantumChannel unitary_channel(const Matrix& u, std::string label = "unitary");
/// exp(-i H t).
QuantumChannel hamiltonian_evolution(const HermitianOperator& h, double t);
/// Pinching onto the spectral projectors of H (degenerate levels grouped).
QuantumChannel dephasing(const HermitianOperator& h);
/// rho -> (1 - p) rho + p 1/d.
QuantumChannel depolarizing(Index dim, double p);
/// rho -> (1 - p) rho + p sigma, Kraus {sqrt(1-p) 1} u {sqrt(p s_i) |v_i><v_j|}.
QuantumChannel partial_replacement(const DensityMatrix& sigma, double p);
/// Generalized amplitude damping with damping probability lambda whose stationary
/// state is the qubit Gibbs state of h = gap |1><1| at inverse temperature beta.
QuantumChannel thermal_qubit(double beta, double gap, double lambda);
/// Acts with channel on factor `site` of the given factorization, identity elsewhere.
QuantumChannel embed(const QuantumChannel& channel, Index site, std::span<const Index> factor_dims);
/// Sequential composition; channels[0] acts first.
QuantumChannel compose(std::span<const QuantumChannel> channels);
/// Convex mixture sum w_k N_k; weights must form a probability vector.
QuantumChannel mix(std::span<const double> weights, std::span<const QuantumChannel> channels);
/// Non-unital measurement {|0><0|, |0><1|} that maps 1/2 to |0><0|.
QuantumChannel reset_measurement();
/// Traces out every factor except `keep` (output dimension = factor_dims[keep]).
QuantumChannel discard_channel(std::span<const Index> factor_dims, Index keep);

/// Haar unitary on C^dim (QR of a complex Ginibre matrix with phase fix).
Matrix random_unitary(Index dim, Rng& rng);
/// Stinespring sample: Haar unitary on system (x) ancilla, ancilla starting in
/// |0>, ancilla traced out.
QuantumChannel random_channel(Index dim, Index ancilla_dim, Rng& rng);
/// Mixture of Haar unitaries (a random unital channel).
QuantumChannel random_unital_channel(Index dim, Index terms, Rng& rng);
/// Hilbert-Schmidt random mixed state G G^dagger / Tr.
DensityMatrix random_density_matrix(Index dim, Rng& rng);
/// Ginibre-based random Hermitian matrix (G + G^dagger) / 2.
HermitianOperator random_hermitian(Index dim, Rng& rng);

/// {"dims": [in, out], "label", "kraus": [matrix schema]}.
nlohmann::json to_json(const QuantumChannel& channel);
QuantumChannel channel_from_json(const nlohmann::json& j);

}  // namespace relent
