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

#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "relent/channels.hpp"
#include "relent/ensembles.hpp"

namespace relent {

inline constexpr int kMaxChainSites = 12;
inline constexpr double kStepFixedPointTolerance = 1e-9;

/// Qubit chain with on-site reference Hamiltonian H_ref = sum_i h_i |1><1|_i.
struct ChainSpec {
  int n_sites = 0;
  std::vector<double> fields;  ///< h_i, one per site
  double beta = 1.0;
  double lambda = 0.0;         ///< bath coupling in [0, 1]
  double gate_time = 0.0;      ///< hopping angle theta of the two-site gates

  void validate() const;
  std::vector<Index> factor_dims() const { return std::vector<Index>(static_cast<std::size_t>(n_sites), 2); }
  Index dim() const { return Index{1} << n_sites; }
  /// H_ref as a dense operator on the full chain.
  HermitianOperator reference_hamiltonian() const;
};

/// Closed site interval [first, last].
struct SiteInterval {
  int first = 0;
  int last = 0;

  int size() const { return last - first + 1; }
  bool contains(int site) const { return site >= first && site <= last; }
  bool contains(const SiteInterval& other) const { return other.first >= first && other.last <= last; }
};

/// One slice of the diamond: the active interval A(tau), the brickwork gate
/// pairs (left site of each pair) and the sites coupled to the bath.
struct DiamondStep {
  SiteInterval slice;
  std::vector<int> gate_pairs;
  std::vector<int> bath_sites;
};

/// Expanding-then-contracting sequence of slices inside the fixed spatial
/// extent [region.first, region.last] (the cone intersection points).
struct DiamondSchedule {
  SiteInterval region;
  std::vector<DiamondStep> steps;

  /// Slice widths min(2 + k, 2 + (n_steps - 1 - k), region width), centred in
  /// the region, so A(tau) grows and shrinks by one site per step. Gates on
  /// pairs (i, i+1) with i = k (mod 2); every slice site couples to the bath.
  static DiamondSchedule make(SiteInterval region, int n_steps);

  /// Throws PreconditionError if any slice leaves the region, nesting is
  /// violated, or a gate/bath site lies outside its slice.
  void validate(const ChainSpec& chain) const;
};

/// Gibbs(H_ref, beta) as a product of single-site Gibbs states.
DensityMatrix build_reference(const ChainSpec& chain);

/// Number-conserving XX+YY rotation exp(-i theta (XX + YY) / 2) on two qubits.
Matrix hopping_gate(double theta);

/// One step as a sequence of local channels (gates, then bath), each applied
/// to a contiguous block of sites starting at `site`.
struct LocalOperation {
  QuantumChannel channel;
  int site;
};

struct StepMap {
  std::vector<LocalOperation> operations;

  Matrix apply_raw(const Matrix& rho, std::span<const Index> factor_dims) const;
  DensityMatrix apply(const DensityMatrix& rho) const;
};

/// Builds the local operations of one step. Rejects gate pairs whose fields
/// differ (the gate would not commute with H_ref) with the commutator norm, and
/// checks that the step fixes build_reference(chain) within
/// kStepFixedPointTolerance.
StepMap step_map(const ChainSpec& chain, const DiamondStep& step, double lambda);

/// Dense Kraus form of step_map (size grows as 4^{bath sites}; intended for
/// small chains and verification).
QuantumChannel step_channel(const ChainSpec& chain, const DiamondStep& step, double lambda);

struct TraceRecord {
  int tau = 0;
  double rel_global = 0.0;      ///< S(rho(tau) || sigma)
  double rel_local = 0.0;       ///< S(rho_A(tau) || sigma_A), A = diamond region
  double production = 0.0;      ///< rel_global(tau) - rel_global(tau - 1); 0 at tau = 0
  double entropy_global = 0.0;  ///< S(rho(tau))
  double energy = 0.0;          ///< Tr{rho(tau) H_ref}
  /// Trace distance of the joint reduced state on the sites outside the
  /// region from its tau = 0 value.
  double outside_drift = 0.0;
};

/// Evolves rho0 through every step of the schedule with coupling chain.lambda.
std::vector<TraceRecord> run(const ChainSpec& chain, const DiamondSchedule& schedule, const DensityMatrix& rho0);

struct LocalityRow {
  int tau = 0;
  double delta_rel_global = 0.0;
  double delta_rel_local = 0.0;
  double difference = 0.0;  ///< delta_rel_local - delta_rel_global
  /// rel_global - rel_local at tau (>= 0 up to round-off).
  double bound_margin = 0.0;
};

/// Per-step changes of relative entropy and relative entanglement entropy.
/// Only the bound rel_local <= rel_global (+1e-9) is asserted: a violation
/// throws std::logic_error.
std::vector<LocalityRow> locality_report(const std::vector<TraceRecord>& records);

/// Reference state with one site replaced by |1><1|.
DensityMatrix flipped_reference(const ChainSpec& chain, int site);

nlohmann::json to_json(const ChainSpec& chain);
ChainSpec chain_spec_from_json(const nlohmann::json& j);

}  // namespace relent
