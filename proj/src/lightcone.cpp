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

#include "relent/lightcone.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "relent/error.hpp"
#include "relent/json_util.hpp"

namespace relent {

namespace {

constexpr double kGateCommutatorTolerance = 1e-10;
constexpr double kLocalBoundTolerance = 1e-9;

DensityMatrix site_gibbs(double beta, double field) {
  const double x = beta * field;
  const std::array<double, 2> p{1.0 / (1.0 + std::exp(-x)), 1.0 / (1.0 + std::exp(x))};
  return DensityMatrix::diagonal(p);
}

DensityMatrix product_state(const std::vector<DensityMatrix>& sites) {
  DensityMatrix acc = sites.front().with_factors({sites.front().dim()});
  for (std::size_t i = 1; i < sites.size(); ++i) acc = tensor(acc, sites[i]);
  return acc;
}

Matrix pair_hamiltonian(double h_left, double h_right) {
  // Basis |00>, |01>, |10>, |11> with the left site most significant.
  Matrix h = Matrix::Zero(4, 4);
  h(1, 1) = h_right;
  h(2, 2) = h_left;
  h(3, 3) = h_left + h_right;
  return h;
}

std::vector<Index> sites_in(const SiteInterval& interval) {
  std::vector<Index> out;
  for (int s = interval.first; s <= interval.last; ++s) out.push_back(s);
  return out;
}

std::vector<Index> sites_outside(const SiteInterval& interval, int n_sites) {
  std::vector<Index> out;
  for (int s = 0; s < n_sites; ++s) {
    if (!interval.contains(s)) out.push_back(s);
  }
  return out;
}

}  // namespace

void ChainSpec::validate() const {
  if (n_sites < 1 || n_sites > kMaxChainSites) {
    throw PreconditionError("chain must have between 1 and " + std::to_string(kMaxChainSites) + " sites");
  }
  if (fields.size() != static_cast<std::size_t>(n_sites)) {
    throw PreconditionError("chain needs exactly one local field per site");
  }
  if (!(beta > 0.0) || !std::isfinite(beta)) throw PreconditionError("chain beta must be finite and > 0");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw PreconditionError("chain lambda must lie in [0, 1]");
  if (!std::isfinite(gate_time)) throw PreconditionError("gate_time must be finite");
  for (double h : fields) {
    if (!std::isfinite(h)) throw PreconditionError("local fields must be finite");
  }
}

HermitianOperator ChainSpec::reference_hamiltonian() const {
  const Index d = dim();
  Matrix h = Matrix::Zero(d, d);
  for (Index basis = 0; basis < d; ++basis) {
    double e = 0.0;
    for (int site = 0; site < n_sites; ++site) {
      if ((basis >> (n_sites - 1 - site)) & 1) e += fields[static_cast<std::size_t>(site)];
    }
    h(basis, basis) = e;
  }
  return HermitianOperator(h);
}

DiamondSchedule DiamondSchedule::make(SiteInterval region, int n_steps) {
  if (region.size() < 2) throw PreconditionError("diamond region needs at least two sites");
  if (n_steps < 1) throw PreconditionError("diamond needs at least one step");
  DiamondSchedule schedule;
  schedule.region = region;
  const int full = region.size();
  for (int k = 0; k < n_steps; ++k) {
    const int width = std::min({2 + k, 2 + (n_steps - 1 - k), full});
    const int first = region.first + (full - width) / 2;
    DiamondStep step;
    step.slice = {first, first + width - 1};
    for (int i = step.slice.first; i < step.slice.last; ++i) {
      if (i % 2 == k % 2) step.gate_pairs.push_back(i);
    }
    for (int s = step.slice.first; s <= step.slice.last; ++s) step.bath_sites.push_back(s);
    schedule.steps.push_back(std::move(step));
  }
  return schedule;
}

void DiamondSchedule::validate(const ChainSpec& chain) const {
  if (region.first < 0 || region.last >= chain.n_sites || region.size() < 1) {
    throw PreconditionError("diamond region lies outside the chain");
  }
  if (steps.empty()) throw PreconditionError("diamond schedule has no steps");
  std::size_t peak = 0;
  for (std::size_t k = 0; k < steps.size(); ++k) {
    if (steps[k].slice.size() > steps[peak].slice.size()) peak = k;
  }
  for (std::size_t k = 0; k < steps.size(); ++k) {
    const auto& step = steps[k];
    if (step.slice.size() < 1 || !region.contains(step.slice)) {
      throw PreconditionError("diamond slice " + std::to_string(k) + " leaves the diamond region");
    }
    if (k + 1 < steps.size()) {
      const bool nested = k < peak ? steps[k + 1].slice.contains(step.slice) : step.slice.contains(steps[k + 1].slice);
      if (!nested) throw PreconditionError("diamond slices must expand then contract (step " + std::to_string(k) + ")");
    }
    for (int g : step.gate_pairs) {
      if (!step.slice.contains(g) || !step.slice.contains(g + 1)) {
        throw PreconditionError("gate pair outside its slice at step " + std::to_string(k));
      }
    }
    for (int b : step.bath_sites) {
      if (!step.slice.contains(b)) throw PreconditionError("bath site outside its slice at step " + std::to_string(k));
    }
  }
}

DensityMatrix build_reference(const ChainSpec& chain) {
  chain.validate();
  std::vector<DensityMatrix> sites;
  for (double h : chain.fields) sites.push_back(site_gibbs(chain.beta, h));
  return product_state(sites);
}

DensityMatrix flipped_reference(const ChainSpec& chain, int site) {
  chain.validate();
  if (site < 0 || site >= chain.n_sites) throw PreconditionError("flipped site out of range");
  std::vector<DensityMatrix> sites;
  for (int s = 0; s < chain.n_sites; ++s) {
    sites.push_back(s == site ? DensityMatrix::basis_state(2, 1)
                              : site_gibbs(chain.beta, chain.fields[static_cast<std::size_t>(s)]));
  }
  return product_state(sites);
}

Matrix hopping_gate(double theta) {
  Matrix u = Matrix::Identity(4, 4);
  const Complex c = std::cos(theta);
  const Complex s = Complex(0.0, -std::sin(theta));
  u(1, 1) = c;
  u(2, 2) = c;
  u(1, 2) = s;
  u(2, 1) = s;
  return u;
}

Matrix StepMap::apply_raw(const Matrix& rho, std::span<const Index> factor_dims) const {
  Matrix out = rho;
  for (const auto& op : operations) out = apply_local_raw(op.channel, out, factor_dims, op.site);
  return out;
}

DensityMatrix StepMap::apply(const DensityMatrix& rho) const {
  return DensityMatrix(apply_raw(rho.matrix(), rho.factor_dims()), rho.factor_dims());
}

StepMap step_map(const ChainSpec& chain, const DiamondStep& step, double lambda) {
  chain.validate();
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw PreconditionError("bath coupling lambda must lie in [0, 1]");
  if (step.slice.first < 0 || step.slice.last >= chain.n_sites) throw PreconditionError("slice outside the chain");

  StepMap map;
  if (chain.gate_time != 0.0) {
    const Matrix gate = hopping_gate(chain.gate_time);
    for (int i : step.gate_pairs) {
      if (!step.slice.contains(i) || !step.slice.contains(i + 1)) {
        throw PreconditionError("gate pair (" + std::to_string(i) + "," + std::to_string(i + 1) + ") outside slice");
      }
      const auto hl = chain.fields[static_cast<std::size_t>(i)];
      const auto hr = chain.fields[static_cast<std::size_t>(i + 1)];
      const double comm = commutator_norm(gate, pair_hamiltonian(hl, hr));
      if (comm > kGateCommutatorTolerance) {
        std::ostringstream os;
        os << "gate on sites (" << i << "," << i + 1 << ") does not commute with the reference Hamiltonian "
           << "(fields " << hl << ", " << hr << "): commutator norm " << comm;
        throw PreconditionError(os.str());
      }
      map.operations.push_back({unitary_channel(gate, "hopping"), i});
    }
  }
  if (lambda > 0.0) {
    for (int b : step.bath_sites) {
      if (!step.slice.contains(b)) throw PreconditionError("bath site outside slice");
      map.operations.push_back({thermal_qubit(chain.beta, chain.fields[static_cast<std::size_t>(b)], lambda), b});
    }
  }

  const DensityMatrix sigma = build_reference(chain);
  const auto dims = chain.factor_dims();
  const Matrix image = map.apply_raw(sigma.matrix(), dims);
  const double residual = trace_norm(image - sigma.matrix());
  if (residual > kStepFixedPointTolerance) {
    std::ostringstream os;
    os << "step does not fix the reference state: residual " << residual;
    throw PreconditionError(os.str());
  }
  return map;
}

QuantumChannel step_channel(const ChainSpec& chain, const DiamondStep& step, double lambda) {
  const StepMap map = step_map(chain, step, lambda);
  const auto dims = chain.factor_dims();
  std::vector<QuantumChannel> embedded;
  embedded.push_back(identity_channel(chain.dim()));
  for (const auto& op : map.operations) {
    std::vector<Index> grouped;
    for (int s = 0; s < op.site; ++s) grouped.push_back(2);
    grouped.push_back(op.channel.dim_in());
    Index covered = 1;
    int s = op.site;
    while (covered < op.channel.dim_in()) {
      covered *= 2;
      ++s;
    }
    for (; s < chain.n_sites; ++s) grouped.push_back(2);
    embedded.push_back(embed(op.channel, op.site, grouped));
  }
  QuantumChannel ch = compose(embedded);
  return QuantumChannel(ch.kraus(), "step[" + std::to_string(step.slice.first) + "," +
                                        std::to_string(step.slice.last) + "]");
}

std::vector<TraceRecord> run(const ChainSpec& chain, const DiamondSchedule& schedule, const DensityMatrix& rho0) {
  chain.validate();
  schedule.validate(chain);
  if (rho0.dim() != chain.dim()) throw PreconditionError("initial state dimension does not match the chain");
  const auto dims = chain.factor_dims();
  const DensityMatrix sigma = build_reference(chain);
  const HermitianOperator h_ref = chain.reference_hamiltonian();
  const auto inside = sites_in(schedule.region);
  const auto outside = sites_outside(schedule.region, chain.n_sites);
  const DensityMatrix sigma_local = partial_trace(sigma, inside);

  DensityMatrix rho = rho0.with_factors(dims);
  const std::optional<DensityMatrix> outside0 =
      outside.empty() ? std::nullopt : std::optional<DensityMatrix>(partial_trace(rho, outside));

  std::vector<TraceRecord> records;
  auto record = [&](int tau) {
    TraceRecord r;
    r.tau = tau;
    r.rel_global = relative_entropy(rho, sigma);
    r.rel_local = relative_entropy(partial_trace(rho, inside), sigma_local);
    r.production = records.empty() ? 0.0 : r.rel_global - records.back().rel_global;
    r.entropy_global = von_neumann_entropy(rho);
    r.energy = expectation(rho, h_ref);
    r.outside_drift = outside0 ? trace_distance(partial_trace(rho, outside), *outside0) : 0.0;
    records.push_back(r);
  };

  record(0);
  for (std::size_t k = 0; k < schedule.steps.size(); ++k) {
    StepMap map;
    try {
      map = step_map(chain, schedule.steps[k], chain.lambda);
    } catch (const PreconditionError& e) {
      throw PreconditionError("step " + std::to_string(k) + ": " + e.what());
    }
    rho = map.apply(rho);
    record(static_cast<int>(k) + 1);
  }
  return records;
}

std::vector<LocalityRow> locality_report(const std::vector<TraceRecord>& records) {
  std::vector<LocalityRow> rows;
  for (std::size_t k = 0; k < records.size(); ++k) {
    const auto& r = records[k];
    LocalityRow row;
    row.tau = r.tau;
    if (k > 0) {
      row.delta_rel_global = r.rel_global - records[k - 1].rel_global;
      row.delta_rel_local = r.rel_local - records[k - 1].rel_local;
    }
    row.difference = row.delta_rel_local - row.delta_rel_global;
    row.bound_margin = r.rel_global - r.rel_local;
    if (r.rel_local > r.rel_global + kLocalBoundTolerance) {
      std::ostringstream os;
      os << "relative entanglement entropy exceeds global relative entropy at tau " << r.tau << ": " << r.rel_local
         << " > " << r.rel_global;
      throw std::logic_error(os.str());
    }
    rows.push_back(row);
  }
  return rows;
}

nlohmann::json to_json(const ChainSpec& chain) {
  return {{"n_sites", chain.n_sites},
          {"fields", chain.fields},
          {"beta", chain.beta},
          {"lambda", chain.lambda},
          {"gate_time", chain.gate_time}};
}

ChainSpec chain_spec_from_json(const nlohmann::json& j) {
  require_keys_subset(j, {"n_sites", "fields", "beta", "lambda", "gate_time"}, "chain");
  ChainSpec chain;
  chain.n_sites = require_key(j, "n_sites", "chain").get<int>();
  const auto& fields = require_key(j, "fields", "chain");
  if (fields.is_number()) {
    chain.fields.assign(static_cast<std::size_t>(std::max(chain.n_sites, 0)), fields.get<double>());
  } else {
    chain.fields = fields.get<std::vector<double>>();
  }
  chain.beta = require_key(j, "beta", "chain").get<double>();
  chain.lambda = j.value("lambda", 0.0);
  chain.gate_time = j.value("gate_time", 0.0);
  chain.validate();
  return chain;
}

}  // namespace relent
