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
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "relent/states.hpp"

namespace relent {

enum class EnsembleKind { kMicrocanonical, kCanonical, kGrandCanonical, kGeneralExponential };

std::string to_string(EnsembleKind kind);
EnsembleKind ensemble_kind_from_string(const std::string& name);

/// Energy window [center - half_width, center + half_width].
struct EnergyShell {
  double center = 0.0;
  double half_width = 0.0;
};

/// One term lambda_i O_i of a general exponential state exp(-sum lambda_i O_i) / Z.
struct WeightedObservable {
  double weight = 0.0;
  HermitianOperator observable;
};

/// Recipe for a reference state. Units: k_B = hbar = 1; beta = 1/T,
/// alpha = beta * mu.
struct EnsembleSpec {
  EnsembleKind kind = EnsembleKind::kCanonical;
  HermitianOperator hamiltonian = HermitianOperator::identity(1);
  std::optional<HermitianOperator> number;
  double beta = 1.0;
  double mu = 0.0;
  std::optional<EnergyShell> shell;
  std::vector<WeightedObservable> generalized;

  double alpha() const { return beta * mu; }
  Index dim() const { return hamiltonian.dim(); }

  /// Throws PreconditionError if the kind-specific fields are missing or invalid.
  void validate() const;

  static EnsembleSpec microcanonical(HermitianOperator h, EnergyShell shell);
  static EnsembleSpec canonical(HermitianOperator h, double beta);
  static EnsembleSpec grand_canonical(HermitianOperator h, HermitianOperator n, double beta, double mu);
  static EnsembleSpec general_exponential(std::vector<WeightedObservable> terms);
};

struct MicrocanonicalState {
  DensityMatrix state;
  Index shell_dim;
};

struct CanonicalState {
  DensityMatrix state;
  double log_partition;
  double free_energy;
};

struct GrandCanonicalState {
  DensityMatrix state;
  double log_partition;
  double grand_potential;
};

struct ExponentialState {
  DensityMatrix state;
  double log_partition;
};

MicrocanonicalState microcanonical(const EnsembleSpec& spec);
CanonicalState canonical(const EnsembleSpec& spec);
GrandCanonicalState grand_canonical(const EnsembleSpec& spec);
ExponentialState general_exponential(const EnsembleSpec& spec);

/// Kind-independent view of the reference state sigma of a spec.
struct ReferenceState {
  DensityMatrix state;
  /// ln Z, or ln D_shell for the microcanonical kind.
  double log_partition;
  /// Number of levels in the energy shell (microcanonical only, else 0).
  Index shell_dim = 0;
  /// Projector onto the energy shell (microcanonical only).
  std::optional<Matrix> shell_projector;
};

ReferenceState reference_state(const EnsembleSpec& spec);

/// Projector onto the eigenvalues of h in the closed window.
Matrix shell_projector(const HermitianOperator& h, const EnergyShell& shell);

/// Max-shifted log(sum exp(x_i)).
double log_sum_exp(const RVector& x);

nlohmann::json to_json(const EnsembleSpec& spec);
EnsembleSpec ensemble_spec_from_json(const nlohmann::json& j);

}  // namespace relent
