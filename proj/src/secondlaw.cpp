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

#include "relent/secondlaw.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "relent/error.hpp"

namespace relent {

namespace {

constexpr double kShellLeakTolerance = 1e-10;

double nan() { return std::numeric_limits<double>::quiet_NaN(); }

/// sum_i w_i Tr{rho O_i} for the general exponential kind.
double generalized_charge(const DensityMatrix& rho, const EnsembleSpec& spec) {
  double acc = 0.0;
  for (const auto& term : spec.generalized) acc += term.weight * expectation(rho, term.observable);
  return acc;
}

}  // namespace

SecondLawLedger ledger_from_states(const DensityMatrix& before, const DensityMatrix& after, const EnsembleSpec& spec,
                                   const ReferenceState& reference, double tolerance) {
  SecondLawLedger l;
  l.kind = spec.kind;
  l.tolerance = tolerance;
  l.entropy_before = von_neumann_entropy(before);
  l.entropy_after = von_neumann_entropy(after);
  l.energy_before = expectation(before, spec.hamiltonian);
  l.energy_after = expectation(after, spec.hamiltonian);
  if (spec.number) {
    l.number_before = expectation(before, *spec.number);
    l.number_after = expectation(after, *spec.number);
  }
  l.rel_before = relative_entropy(before, reference.state);
  l.rel_after = relative_entropy(after, reference.state);

  l.clausius_terms = -(l.entropy_after - l.entropy_before);
  switch (spec.kind) {
    case EnsembleKind::kMicrocanonical:
      break;
    case EnsembleKind::kCanonical:
      l.clausius_terms += spec.beta * (l.energy_after - l.energy_before);
      break;
    case EnsembleKind::kGrandCanonical:
      l.clausius_terms += spec.beta * (l.energy_after - l.energy_before);
      l.clausius_terms -= spec.alpha() * (*l.number_after - *l.number_before);
      break;
    case EnsembleKind::kGeneralExponential:
      l.clausius_terms += generalized_charge(after, spec) - generalized_charge(before, spec);
      break;
  }

  l.support_violation = std::isinf(l.rel_before) || std::isinf(l.rel_after);
  if (!l.support_violation) {
    l.delta_rel = l.rel_after - l.rel_before;
    l.identity_residual = std::abs(l.delta_rel - l.clausius_terms);
    l.inequality_margin = -l.delta_rel;
    l.pass = l.delta_rel <= tolerance && l.identity_residual <= tolerance;
  } else if (std::isinf(l.rel_before)) {
    // Anything is <= +inf: the inequality holds, the identity is undefined.
    l.delta_rel = nan();
    l.identity_residual = nan();
    l.inequality_margin = std::numeric_limits<double>::infinity();
    l.pass = true;
  } else {
    l.delta_rel = std::numeric_limits<double>::infinity();
    l.identity_residual = nan();
    l.inequality_margin = -std::numeric_limits<double>::infinity();
    l.pass = false;
  }
  return l;
}

SecondLawLedger evaluate(const DensityMatrix& rho0, const QuantumChannel& channel, const EnsembleSpec& spec,
                         double tolerance) {
  return evaluate(rho0, channel, spec, reference_state(spec), tolerance);
}

SecondLawLedger evaluate(const DensityMatrix& rho0, const QuantumChannel& channel, const EnsembleSpec& spec,
                         const ReferenceState& reference, double tolerance) {
  if (rho0.dim() != reference.state.dim() || channel.dim_in() != rho0.dim() || channel.dim_out() != rho0.dim()) {
    throw PreconditionError("second-law evaluation: state, channel and ensemble dimensions differ");
  }
  const double residual = fixed_point_residual(channel, reference.state);
  if (residual > kLedgerTolerance) {
    std::ostringstream os;
    os << "channel '" << channel.label() << "' does not fix the " << to_string(spec.kind)
       << " reference state: ||N(sigma) - sigma||_1 = " << residual;
    throw PreconditionError(os.str());
  }
  if (reference.shell_projector) {
    const double inside = expectation(rho0, *reference.shell_projector);
    if (inside < 1.0 - kShellLeakTolerance) {
      std::ostringstream os;
      os << "initial state is not supported in the energy shell: weight inside is " << inside;
      throw PreconditionError(os.str());
    }
  }
  return ledger_from_states(rho0, apply(channel, rho0), spec, reference, tolerance);
}

std::optional<double> monotonicity_gap(const DensityMatrix& rho, const DensityMatrix& sigma,
                                       const QuantumChannel& channel) {
  const double before = relative_entropy(rho, sigma);
  if (std::isinf(before)) return std::nullopt;
  return before - relative_entropy(apply(channel, rho), apply(channel, sigma));
}

double relative_entropy_to_uniform(double p1, double p2, double p3) {
  const double ln3 = std::log(3.0);
  double acc = 0.0;
  for (double p : {p1, p2, p3}) {
    if (p > 0.0) acc += p * (std::log(p) + ln3);
  }
  return acc;
}

std::vector<ContourPoint> contour_grid(int resolution) {
  if (resolution < 2) throw PreconditionError("contour grid resolution must be >= 2");
  std::vector<ContourPoint> grid;
  grid.reserve(static_cast<std::size_t>((resolution + 1) * (resolution + 2) / 2));
  const double r = resolution;
  for (int i = 0; i <= resolution; ++i) {
    for (int j = 0; j <= resolution - i; ++j) {
      const double p1 = i / r;
      const double p2 = j / r;
      const double p3 = (i + j == resolution) ? 0.0 : 1.0 - p1 - p2;
      grid.push_back({p1, p2, p3, relative_entropy_to_uniform(p1, p2, p3)});
    }
  }
  return grid;
}

nlohmann::json to_json(const SecondLawLedger& l) {
  auto num = [](double v) -> nlohmann::json {
    if (std::isnan(v)) return nullptr;
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
  };
  nlohmann::json j{{"ensemble", to_string(l.kind)},
                   {"S_before", num(l.entropy_before)},
                   {"S_after", num(l.entropy_after)},
                   {"E_before", num(l.energy_before)},
                   {"E_after", num(l.energy_after)},
                   {"rel_before", num(l.rel_before)},
                   {"rel_after", num(l.rel_after)},
                   {"delta_rel", num(l.delta_rel)},
                   {"clausius_terms", num(l.clausius_terms)},
                   {"identity_residual", num(l.identity_residual)},
                   {"inequality_margin", num(l.inequality_margin)},
                   {"support_violation", l.support_violation},
                   {"tolerance", l.tolerance},
                   {"verdict", l.pass ? "pass" : "fail"}};
  j["N_before"] = l.number_before ? num(*l.number_before) : nlohmann::json(nullptr);
  j["N_after"] = l.number_after ? num(*l.number_after) : nlohmann::json(nullptr);
  return j;
}

}  // namespace relent
