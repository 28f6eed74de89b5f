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

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "relent/channels.hpp"
#include "relent/cli.hpp"
#include "relent/ensembles.hpp"
#include "relent/error.hpp"
#include "relent/geometry.hpp"
#include "relent/lightcone.hpp"
#include "relent/rng.hpp"
#include "relent/secondlaw.hpp"
#include "relent/states.hpp"

namespace py = pybind11;
using namespace relent;

namespace {

QuantumChannel to_channel(const std::vector<Matrix>& kraus) {
  if (kraus.empty()) throw PreconditionError("empty Kraus list");
  return QuantumChannel(KrausSet(kraus.begin(), kraus.end()), "python");
}

py::dict ledger_dict(const SecondLawLedger& l) {
  py::dict d;
  d["ensemble"] = to_string(l.kind);
  d["S_before"] = l.entropy_before;
  d["S_after"] = l.entropy_after;
  d["E_before"] = l.energy_before;
  d["E_after"] = l.energy_after;
  d["N_before"] = l.number_before ? py::cast(*l.number_before) : py::none();
  d["N_after"] = l.number_after ? py::cast(*l.number_after) : py::none();
  d["rel_before"] = l.rel_before;
  d["rel_after"] = l.rel_after;
  d["delta_rel"] = l.delta_rel;
  d["clausius_terms"] = l.clausius_terms;
  d["identity_residual"] = l.identity_residual;
  d["inequality_margin"] = l.inequality_margin;
  d["support_violation"] = l.support_violation;
  d["tolerance"] = l.tolerance;
  d["pass"] = l.pass;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Relative entropy ledgers, channels, light-cone runs and entropy-current checks.";

  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);

  m.def(
      "von_neumann_entropy", [](const Matrix& rho) { return von_neumann_entropy(DensityMatrix(rho)); }, py::arg("rho"));
  m.def(
      "relative_entropy",
      [](const Matrix& rho, const Matrix& sigma) { return relative_entropy(DensityMatrix(rho), DensityMatrix(sigma)); },
      py::arg("rho"), py::arg("sigma"), "S(rho || sigma) in nats; inf on a support violation.");
  m.def(
      "trace_distance",
      [](const Matrix& rho, const Matrix& sigma) { return trace_distance(DensityMatrix(rho), DensityMatrix(sigma)); },
      py::arg("rho"), py::arg("sigma"));
  m.def(
      "partial_trace",
      [](const Matrix& rho, std::vector<Index> dims, std::vector<Index> keep) {
        return partial_trace(DensityMatrix(rho, std::move(dims)), keep).matrix();
      },
      py::arg("rho"), py::arg("dims"), py::arg("keep"));

  m.def(
      "gibbs_state",
      [](const Matrix& h, double beta) {
        const CanonicalState c = canonical(EnsembleSpec::canonical(HermitianOperator(h), beta));
        return py::make_tuple(c.state.matrix(), c.log_partition);
      },
      py::arg("H"), py::arg("beta"), "Returns (sigma, ln Z).");

  m.def(
      "random_density_matrix",
      [](Index dim, std::uint64_t seed) {
        Rng rng(seed);
        return random_density_matrix(dim, rng).matrix();
      },
      py::arg("dim"), py::arg("seed"));
  m.def(
      "random_channel",
      [](Index dim, Index ancilla, std::uint64_t seed) {
        Rng rng(seed);
        const auto k = random_channel(dim, ancilla, rng).kraus();
        return std::vector<Matrix>(k.begin(), k.end());
      },
      py::arg("dim"), py::arg("ancilla"), py::arg("seed"), "Kraus operators of a Stinespring-random channel.");
  m.def(
      "apply_channel",
      [](const std::vector<Matrix>& kraus, const Matrix& rho) { return apply(to_channel(kraus), DensityMatrix(rho)).matrix(); },
      py::arg("kraus"), py::arg("rho"));
  m.def(
      "verify_channel",
      [](const std::vector<Matrix>& kraus, std::optional<Matrix> sigma) {
        const KrausSet k(kraus.begin(), kraus.end());
        std::optional<DensityMatrix> s;
        if (sigma) s.emplace(*sigma);
        const ChannelReport r = verify(k, s ? &*s : nullptr);
        py::dict d;
        d["trace_preserving"] = r.trace_preserving;
        d["completely_positive"] = r.completely_positive;
        d["unital"] = r.unital;
        d["fixed_point"] = r.fixed_point ? py::cast(*r.fixed_point) : py::none();
        d["passes"] = r.passes();
        return d;
      },
      py::arg("kraus"), py::arg("sigma") = py::none());
  m.def(
      "monotonicity_gap",
      [](const Matrix& rho, const Matrix& sigma, const std::vector<Matrix>& kraus) {
        return monotonicity_gap(DensityMatrix(rho), DensityMatrix(sigma), to_channel(kraus));
      },
      py::arg("rho"), py::arg("sigma"), py::arg("kraus"), "None when S(rho || sigma) is infinite.");

  m.def(
      "_secondlaw_ledger",
      [](const std::string& ensemble_json, const Matrix& rho, const std::vector<Matrix>& kraus, double tolerance) {
        const EnsembleSpec spec = ensemble_spec_from_json(nlohmann::json::parse(ensemble_json));
        return ledger_dict(evaluate(DensityMatrix(rho), to_channel(kraus), spec, tolerance));
      },
      py::arg("ensemble_json"), py::arg("rho"), py::arg("kraus"), py::arg("tolerance") = kLedgerTolerance);

  m.def(
      "contour_grid",
      [](int resolution) {
        const auto grid = contour_grid(resolution);
        Eigen::Matrix<double, Eigen::Dynamic, 4, Eigen::RowMajor> out(static_cast<Index>(grid.size()), 4);
        for (std::size_t k = 0; k < grid.size(); ++k) {
          out.row(static_cast<Index>(k)) << grid[k].p1, grid[k].p2, grid[k].p3, grid[k].rel_entropy;
        }
        return out;
      },
      py::arg("resolution"), "Rows (p1, p2, p3, S(p || uniform)).");

  m.def(
      "_lightcone_run",
      [](const std::string& chain_json, int first, int last, int steps, std::optional<Matrix> rho0) {
        const ChainSpec chain = chain_spec_from_json(nlohmann::json::parse(chain_json));
        const DiamondSchedule schedule = DiamondSchedule::make({first, last}, steps);
        schedule.validate(chain);
        const DensityMatrix start =
            rho0 ? DensityMatrix(*rho0, chain.factor_dims()) : build_reference(chain);
        const auto records = run(chain, schedule, start);
        const auto locality = locality_report(records);
        py::list rows;
        for (std::size_t k = 0; k < records.size(); ++k) {
          py::dict d;
          d["tau"] = records[k].tau;
          d["rel_global"] = records[k].rel_global;
          d["rel_local"] = records[k].rel_local;
          d["production"] = records[k].production;
          d["entropy_global"] = records[k].entropy_global;
          d["energy"] = records[k].energy;
          d["outside_drift"] = records[k].outside_drift;
          d["difference"] = locality[k].difference;
          rows.append(d);
        }
        return rows;
      },
      py::arg("chain_json"), py::arg("first"), py::arg("last"), py::arg("steps"), py::arg("rho0") = py::none());
  m.def(
      "_flipped_reference",
      [](const std::string& chain_json, int site) {
        return flipped_reference(chain_spec_from_json(nlohmann::json::parse(chain_json)), site).matrix();
      },
      py::arg("chain_json"), py::arg("site"));

  m.def(
      "geometry_balance",
      [](const std::string& preset, int level) {
        const auto fields = geometry::preset(preset, level);
        const auto b = geometry::diamond_balance(geometry::entropy_current(fields), geometry::preset_diamond(level));
        py::dict d;
        d["volume_integral"] = b.volume_integral;
        d["boundary_integral"] = b.boundary_integral;
        d["residual"] = b.residual;
        return d;
      },
      py::arg("preset"), py::arg("level"));
  m.def("geometry_presets", &geometry::preset_names);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out;
        std::ostringstream err;
        const int code = cli::run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command-line tool in-process; returns (exit_code, stdout, stderr).");
}
