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

#include "relent/ensembles.hpp"

#include <cmath>
#include <sstream>

#include "relent/error.hpp"
#include "relent/json_util.hpp"

namespace relent {

namespace {

constexpr double kCommutatorTolerance = 1e-10;

/// exp(-x_i - shift) / Z from eigenvalues of the exponent generator K.
struct GibbsWeights {
  RVector probabilities;
  double log_partition;
};

GibbsWeights gibbs_weights(const RVector& generator_eigenvalues) {
  const RVector neg = -generator_eigenvalues;
  const double log_z = log_sum_exp(neg);
  return {(neg.array() - log_z).exp().matrix(), log_z};
}

DensityMatrix gibbs_state(const Matrix& generator, double* log_partition) {
  const Eigensystem eig = eigh(generator);
  const GibbsWeights w = gibbs_weights(eig.values);
  *log_partition = w.log_partition;
  return DensityMatrix(Eigensystem{w.probabilities, eig.vectors}.reconstruct());
}

void require_kind(const EnsembleSpec& spec, EnsembleKind kind) {
  if (spec.kind != kind) {
    throw PreconditionError("ensemble spec has kind '" + to_string(spec.kind) + "', expected '" +
                            to_string(kind) + "'");
  }
  spec.validate();
}

}  // namespace

std::string to_string(EnsembleKind kind) {
  switch (kind) {
    case EnsembleKind::kMicrocanonical:
      return "microcanonical";
    case EnsembleKind::kCanonical:
      return "canonical";
    case EnsembleKind::kGrandCanonical:
      return "grand_canonical";
    case EnsembleKind::kGeneralExponential:
      return "general_exponential";
  }
  return "unknown";
}

EnsembleKind ensemble_kind_from_string(const std::string& name) {
  if (name == "microcanonical") return EnsembleKind::kMicrocanonical;
  if (name == "canonical") return EnsembleKind::kCanonical;
  if (name == "grand_canonical") return EnsembleKind::kGrandCanonical;
  if (name == "general_exponential") return EnsembleKind::kGeneralExponential;
  throw PreconditionError("unknown ensemble kind '" + name + "'");
}

double log_sum_exp(const RVector& x) {
  const double m = x.maxCoeff();
  return m + std::log((x.array() - m).exp().sum());
}

void EnsembleSpec::validate() const {
  switch (kind) {
    case EnsembleKind::kMicrocanonical: {
      if (!shell) throw PreconditionError("microcanonical ensemble requires an energy shell");
      if (!(shell->half_width >= 0.0)) throw PreconditionError("energy shell half width must be >= 0");
      const Eigensystem eig = eigh(hamiltonian);
      const bool any = ((eig.values.array() - shell->center).abs() <= shell->half_width).any();
      if (!any) throw PreconditionError("energy shell contains no eigenvalue of H");
      break;
    }
    case EnsembleKind::kGrandCanonical:
      if (!number) throw PreconditionError("grand canonical ensemble requires a number operator N");
      if (number->dim() != hamiltonian.dim()) throw PreconditionError("H and N dimensions differ");
      [[fallthrough]];
    case EnsembleKind::kCanonical:
      if (!(beta > 0.0) || !std::isfinite(beta)) throw PreconditionError("beta must be finite and > 0");
      if (!std::isfinite(mu)) throw PreconditionError("mu must be finite");
      break;
    case EnsembleKind::kGeneralExponential:
      if (generalized.empty()) {
        throw PreconditionError("general exponential ensemble requires a non-empty observable list");
      }
      for (const auto& term : generalized) {
        if (term.observable.dim() != generalized.front().observable.dim()) {
          throw PreconditionError("general exponential observables have mismatched dimensions");
        }
        if (!std::isfinite(term.weight)) throw PreconditionError("observable weights must be finite");
      }
      break;
  }
}

EnsembleSpec EnsembleSpec::microcanonical(HermitianOperator h, EnergyShell shell) {
  EnsembleSpec spec;
  spec.kind = EnsembleKind::kMicrocanonical;
  spec.hamiltonian = std::move(h);
  spec.shell = shell;
  spec.validate();
  return spec;
}

EnsembleSpec EnsembleSpec::canonical(HermitianOperator h, double beta) {
  EnsembleSpec spec;
  spec.kind = EnsembleKind::kCanonical;
  spec.hamiltonian = std::move(h);
  spec.beta = beta;
  spec.validate();
  return spec;
}

EnsembleSpec EnsembleSpec::grand_canonical(HermitianOperator h, HermitianOperator n, double beta, double mu) {
  EnsembleSpec spec;
  spec.kind = EnsembleKind::kGrandCanonical;
  spec.hamiltonian = std::move(h);
  spec.number = std::move(n);
  spec.beta = beta;
  spec.mu = mu;
  spec.validate();
  return spec;
}

EnsembleSpec EnsembleSpec::general_exponential(std::vector<WeightedObservable> terms) {
  EnsembleSpec spec;
  spec.kind = EnsembleKind::kGeneralExponential;
  if (!terms.empty()) spec.hamiltonian = HermitianOperator(Matrix::Zero(terms[0].observable.dim(), terms[0].observable.dim()));
  spec.generalized = std::move(terms);
  spec.validate();
  return spec;
}

Matrix shell_projector(const HermitianOperator& h, const EnergyShell& shell) {
  const Eigensystem eig = eigh(h);
  Matrix p = Matrix::Zero(h.dim(), h.dim());
  for (Index i = 0; i < eig.dim(); ++i) {
    if (std::abs(eig.values(i) - shell.center) <= shell.half_width) {
      p += eig.vectors.col(i) * eig.vectors.col(i).adjoint();
    }
  }
  return p;
}

MicrocanonicalState microcanonical(const EnsembleSpec& spec) {
  require_kind(spec, EnsembleKind::kMicrocanonical);
  const Matrix p = shell_projector(spec.hamiltonian, *spec.shell);
  const auto d = static_cast<Index>(std::llround(p.trace().real()));
  return {DensityMatrix(p / static_cast<double>(d)), d};
}

CanonicalState canonical(const EnsembleSpec& spec) {
  require_kind(spec, EnsembleKind::kCanonical);
  double log_z = 0.0;
  DensityMatrix sigma = gibbs_state(spec.beta * spec.hamiltonian.matrix(), &log_z);
  return {std::move(sigma), log_z, -log_z / spec.beta};
}

GrandCanonicalState grand_canonical(const EnsembleSpec& spec) {
  require_kind(spec, EnsembleKind::kGrandCanonical);
  const double comm = commutator_norm(spec.hamiltonian.matrix(), spec.number->matrix());
  if (comm > kCommutatorTolerance) {
    std::ostringstream os;
    os << "grand canonical ensemble requires [H, N] = 0; commutator Frobenius norm is " << comm;
    throw PreconditionError(os.str());
  }
  double log_z = 0.0;
  const Matrix generator = spec.beta * (spec.hamiltonian.matrix() - spec.mu * spec.number->matrix());
  DensityMatrix sigma = gibbs_state(generator, &log_z);
  return {std::move(sigma), log_z, -log_z / spec.beta};
}

ExponentialState general_exponential(const EnsembleSpec& spec) {
  require_kind(spec, EnsembleKind::kGeneralExponential);
  const Index d = spec.generalized.front().observable.dim();
  Matrix generator = Matrix::Zero(d, d);
  for (const auto& term : spec.generalized) generator += term.weight * term.observable.matrix();
  double log_z = 0.0;
  DensityMatrix sigma = gibbs_state(generator, &log_z);
  return {std::move(sigma), log_z};
}

ReferenceState reference_state(const EnsembleSpec& spec) {
  switch (spec.kind) {
    case EnsembleKind::kMicrocanonical: {
      auto m = microcanonical(spec);
      return {m.state, std::log(static_cast<double>(m.shell_dim)), m.shell_dim,
              shell_projector(spec.hamiltonian, *spec.shell)};
    }
    case EnsembleKind::kCanonical: {
      auto c = canonical(spec);
      return {c.state, c.log_partition, 0, std::nullopt};
    }
    case EnsembleKind::kGrandCanonical: {
      auto g = grand_canonical(spec);
      return {g.state, g.log_partition, 0, std::nullopt};
    }
    case EnsembleKind::kGeneralExponential: {
      auto e = general_exponential(spec);
      return {e.state, e.log_partition, 0, std::nullopt};
    }
  }
  throw PreconditionError("unknown ensemble kind");
}

nlohmann::json to_json(const EnsembleSpec& spec) {
  nlohmann::json j;
  j["kind"] = to_string(spec.kind);
  switch (spec.kind) {
    case EnsembleKind::kMicrocanonical:
      j["H"] = matrix_to_json(spec.hamiltonian.matrix());
      j["shell"] = {{"center", spec.shell->center}, {"half_width", spec.shell->half_width}};
      break;
    case EnsembleKind::kGrandCanonical:
      j["N"] = matrix_to_json(spec.number->matrix());
      j["mu"] = spec.mu;
      [[fallthrough]];
    case EnsembleKind::kCanonical:
      j["H"] = matrix_to_json(spec.hamiltonian.matrix());
      j["beta"] = spec.beta;
      break;
    case EnsembleKind::kGeneralExponential: {
      auto terms = nlohmann::json::array();
      for (const auto& t : spec.generalized) {
        terms.push_back({{"weight", t.weight}, {"observable", matrix_to_json(t.observable.matrix())}});
      }
      j["generalized"] = terms;
      break;
    }
  }
  return j;
}

EnsembleSpec ensemble_spec_from_json(const nlohmann::json& j) {
  require_keys_subset(j, {"kind", "H", "N", "beta", "mu", "shell", "generalized"}, "ensemble");
  EnsembleSpec spec;
  spec.kind = ensemble_kind_from_string(require_key(j, "kind", "ensemble").get<std::string>());
  if (spec.kind == EnsembleKind::kGeneralExponential) {
    for (const auto& t : require_key(j, "generalized", "ensemble")) {
      require_keys_subset(t, {"weight", "observable"}, "generalized term");
      spec.generalized.push_back({require_key(t, "weight", "generalized term").get<double>(),
                                  HermitianOperator(matrix_from_json(require_key(t, "observable", "generalized term")))});
    }
    if (!spec.generalized.empty()) {
      const Index d = spec.generalized.front().observable.dim();
      spec.hamiltonian = j.contains("H") ? HermitianOperator(matrix_from_json(j.at("H")))
                                         : HermitianOperator(Matrix::Zero(d, d));
    }
  } else {
    spec.hamiltonian = HermitianOperator(matrix_from_json(require_key(j, "H", "ensemble")));
  }
  if (j.contains("N")) spec.number = HermitianOperator(matrix_from_json(j.at("N")));
  if (j.contains("beta")) spec.beta = j.at("beta").get<double>();
  if (j.contains("mu")) spec.mu = j.at("mu").get<double>();
  if (j.contains("shell")) {
    const auto& s = j.at("shell");
    require_keys_subset(s, {"center", "half_width"}, "shell");
    spec.shell = EnergyShell{require_key(s, "center", "shell").get<double>(),
                             require_key(s, "half_width", "shell").get<double>()};
  }
  spec.validate();
  return spec;
}

}  // namespace relent
