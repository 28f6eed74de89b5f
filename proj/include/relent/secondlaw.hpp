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
#include <vector>

#include <nlohmann/json.hpp>

#include "relent/channels.hpp"
#include "relent/ensembles.hpp"

namespace relent {

inline constexpr double kLedgerTolerance = 1e-8;

/// Every term of one ensemble second-law evaluation rho0 -> N(rho0).
///
///   identity:   dRel = -dS + beta dE - alpha dN      (grand canonical)
///               dRel = -dS + beta dE                 (canonical)
///               dRel = -dS                           (microcanonical)
///               dRel = -dS + sum_i w_i d<O_i>        (general exponential)
///   inequality: dRel <= 0 whenever N(sigma) = sigma
struct SecondLawLedger {
  EnsembleKind kind = EnsembleKind::kCanonical;
  double entropy_before = 0.0;
  double entropy_after = 0.0;
  double energy_before = 0.0;
  double energy_after = 0.0;
  std::optional<double> number_before;
  std::optional<double> number_after;
  double rel_before = 0.0;  ///< S(rho || sigma), may be +inf
  double rel_after = 0.0;
  double delta_rel = 0.0;   ///< rel_after - rel_before (NaN when rel_before is infinite)
  /// -dS + beta dE - alpha dN (terms absent for the kind are zero).
  double clausius_terms = 0.0;
  double identity_residual = 0.0;
  /// -delta_rel: how far the inequality is from saturation.
  double inequality_margin = 0.0;
  /// True when rel_before or rel_after is infinite (support violation).
  bool support_violation = false;
  double tolerance = kLedgerTolerance;
  bool pass = false;
};

/// Ledger from explicit before/after states (no channel check).
SecondLawLedger ledger_from_states(const DensityMatrix& before, const DensityMatrix& after, const EnsembleSpec& spec,
                                   const ReferenceState& reference, double tolerance = kLedgerTolerance);

/// Applies channel to rho0 and fills the ledger. Throws PreconditionError when
/// the channel does not fix the reference state (residual above
/// kLedgerTolerance) or, for the microcanonical kind, when rho0 leaks out of
/// the energy shell.
SecondLawLedger evaluate(const DensityMatrix& rho0, const QuantumChannel& channel, const EnsembleSpec& spec,
                         double tolerance = kLedgerTolerance);
SecondLawLedger evaluate(const DensityMatrix& rho0, const QuantumChannel& channel, const EnsembleSpec& spec,
                         const ReferenceState& reference, double tolerance = kLedgerTolerance);

/// S(rho || sigma) - S(N(rho) || N(sigma)); std::nullopt when S(rho || sigma)
/// is infinite (the pair is incomparable).
std::optional<double> monotonicity_gap(const DensityMatrix& rho, const DensityMatrix& sigma,
                                       const QuantumChannel& channel);

struct ContourPoint {
  double p1;
  double p2;
  double p3;
  double rel_entropy;  ///< S(p || uniform) in nats
};

/// KL divergence of a distribution on three outcomes from the uniform one.
double relative_entropy_to_uniform(double p1, double p2, double p3);

/// Barycentric grid p = (i, j, k) / resolution with i + j + k = resolution,
/// ordered by i then j; p3 = 1 - p1 - p2.
std::vector<ContourPoint> contour_grid(int resolution);

nlohmann::json to_json(const SecondLawLedger& ledger);

}  // namespace relent
