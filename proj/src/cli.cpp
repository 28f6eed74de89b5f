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

#include "relent/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "relent/channels.hpp"
#include "relent/ensembles.hpp"
#include "relent/error.hpp"
#include "relent/geometry.hpp"
#include "relent/json_util.hpp"
#include "relent/lightcone.hpp"
#include "relent/rng.hpp"
#include "relent/secondlaw.hpp"
#include "relent/states.hpp"

namespace relent::cli {

namespace {

using nlohmann::json;

constexpr std::uint64_t kDefaultSeed = 20260101;
constexpr double kLightconeTolerance = 1e-9;

struct GlobalOptions {
  std::optional<std::uint64_t> seed;
  std::optional<double> tolerance;
  std::string format = "csv";
  std::string out;
};

/// A rectangular result: header plus rows of preformatted cells, and the
/// same data as JSON objects.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  json records = json::array();

  void add(std::vector<std::pair<std::string, json>> cells) {
    std::vector<std::string> row;
    json record = json::object();
    for (auto& [name, value] : cells) {
      if (rows.empty() && header.size() < cells.size()) header.push_back(name);
      if (value.is_number_float()) {
        row.push_back(format_double(value.get<double>()));
      } else if (value.is_string()) {
        row.push_back(value.get<std::string>());
      } else {
        row.push_back(value.dump());
      }
      record[name] = std::move(value);
    }
    rows.push_back(std::move(row));
    records.push_back(std::move(record));
  }
};

/// Floats that JSON cannot hold are written as strings.
json num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

void write_table(const Table& table, const std::string& format, std::ostream& os) {
  if (format == "json") {
    // Keep full precision and a fixed layout for byte-stable output.
    os << "[\n";
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      os << "  {";
      for (std::size_t c = 0; c < table.header.size(); ++c) {
        const auto& cell = table.records[r][table.header[c]];
        os << (c ? ", " : "") << json(table.header[c]).dump() << ": ";
        if (cell.is_number_float()) {
          os << format_double(cell.get<double>());
        } else {
          os << cell.dump();
        }
      }
      os << "}" << (r + 1 < table.rows.size() ? "," : "") << "\n";
    }
    os << "]\n";
    return;
  }
  for (std::size_t c = 0; c < table.header.size(); ++c) os << (c ? "," : "") << table.header[c];
  os << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << row[c];
    os << "\n";
  }
}

/// Writes to --out, else to $RELENT_OUT_DIR/<command>.<format>, else to out.
void emit(const Table& table, const GlobalOptions& g, const std::string& command, std::ostream& out) {
  std::filesystem::path path;
  if (!g.out.empty()) {
    path = g.out;
  } else if (const char* dir = std::getenv(kOutDirEnv); dir != nullptr && *dir != '\0') {
    path = std::filesystem::path(dir) / (command + "." + g.format);
  }
  if (path.empty()) {
    write_table(table, g.format, out);
    return;
  }
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream file(path, std::ios::binary);
  if (!file) throw PreconditionError("cannot open output file '" + path.string() + "'");
  write_table(table, g.format, file);
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open config file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw PreconditionError("config '" + path + "' is not valid JSON: " + e.what());
  }
}

std::uint64_t resolve_seed(const GlobalOptions& g, const json& config) {
  if (g.seed) return *g.seed;
  if (config.contains("seed")) return config.at("seed").get<std::uint64_t>();
  return kDefaultSeed;
}

// ---------------------------------------------------------------- contours

int cmd_contours(int resolution, const GlobalOptions& g, std::ostream& out) {
  Table table;
  for (const auto& p : contour_grid(resolution)) {
    table.add({{"p1", p.p1}, {"p2", p.p2}, {"p3", p.p3}, {"rel_entropy", p.rel_entropy}});
  }
  emit(table, g, "contours", out);
  return kExitOk;
}

// ---------------------------------------------------------------- secondlaw

DensityMatrix make_state(const json& j, const EnsembleSpec& spec, const ReferenceState& reference, Rng& rng) {
  const std::string type = require_key(j, "type", "state").get<std::string>();
  const Index dim = spec.hamiltonian.dim();
  if (type == "random") {
    require_keys_subset(j, {"type"}, "state");
    DensityMatrix rho = random_density_matrix(dim, rng);
    if (!reference.shell_projector) return rho;
    const Matrix& p = *reference.shell_projector;
    Matrix inside = p * rho.matrix() * p;
    return DensityMatrix(inside / inside.trace().real());
  }
  if (type == "basis") {
    require_keys_subset(j, {"type", "index"}, "state");
    return DensityMatrix::basis_state(dim, require_key(j, "index", "state").get<Index>());
  }
  if (type == "maximally_mixed") {
    require_keys_subset(j, {"type"}, "state");
    return DensityMatrix::maximally_mixed(dim);
  }
  if (type == "reference") {
    require_keys_subset(j, {"type"}, "state");
    return reference.state;
  }
  if (type == "explicit") {
    require_keys_subset(j, {"type", "state"}, "state");
    return density_matrix_from_json(require_key(j, "state", "state"));
  }
  throw PreconditionError("unknown state type '" + type + "'");
}

QuantumChannel make_channel(const json& j, const EnsembleSpec& spec, const ReferenceState& reference) {
  const std::string type = require_key(j, "type", "channel").get<std::string>();
  if (type == "dephasing") {
    require_keys_subset(j, {"type"}, "channel");
    return dephasing(spec.hamiltonian);
  }
  if (type == "hamiltonian_evolution") {
    require_keys_subset(j, {"type", "t"}, "channel");
    return hamiltonian_evolution(spec.hamiltonian, require_key(j, "t", "channel").get<double>());
  }
  if (type == "partial_replacement") {
    require_keys_subset(j, {"type", "p"}, "channel");
    return partial_replacement(reference.state, require_key(j, "p", "channel").get<double>());
  }
  if (type == "depolarizing") {
    require_keys_subset(j, {"type", "p"}, "channel");
    return depolarizing(spec.hamiltonian.dim(), require_key(j, "p", "channel").get<double>());
  }
  if (type == "thermal_qubit") {
    require_keys_subset(j, {"type", "lambda"}, "channel");
    if (spec.hamiltonian.dim() != 2) throw PreconditionError("thermal_qubit channel needs a two-level Hamiltonian");
    const RVector e = eigh(spec.hamiltonian).values;
    return thermal_qubit(spec.beta, e(1) - e(0), require_key(j, "lambda", "channel").get<double>());
  }
  if (type == "kraus") {
    require_keys_subset(j, {"type", "channel"}, "channel");
    return channel_from_json(require_key(j, "channel", "channel"));
  }
  if (type == "compose") {
    require_keys_subset(j, {"type", "channels"}, "channel");
    std::vector<QuantumChannel> parts;
    for (const auto& c : require_key(j, "channels", "channel")) parts.push_back(make_channel(c, spec, reference));
    if (parts.empty()) throw PreconditionError("compose channel needs at least one part");
    return compose(parts);
  }
  throw PreconditionError("unknown channel type '" + type + "'");
}

int cmd_secondlaw(const std::string& config_path, const GlobalOptions& g, std::ostream& out, std::ostream& err) {
  const json config = load_json(config_path);
  require_keys_subset(config, {"seed", "tolerance", "ensemble", "cases"}, "secondlaw config");
  const EnsembleSpec spec = ensemble_spec_from_json(require_key(config, "ensemble", "secondlaw config"));
  const ReferenceState reference = reference_state(spec);
  const double tolerance = g.tolerance ? *g.tolerance : config.value("tolerance", kLedgerTolerance);
  if (!(tolerance >= 0.0)) throw PreconditionError("tolerance must be >= 0");
  Rng rng(resolve_seed(g, config));

  Table table;
  json failures = json::array();
  for (const auto& c : require_key(config, "cases", "secondlaw config")) {
    require_keys_subset(c, {"label", "state", "channel", "repeat"}, "secondlaw case");
    const std::string label = c.value("label", std::string("case"));
    const int repeat = c.value("repeat", 1);
    if (repeat < 1) throw PreconditionError("case '" + label + "': repeat must be >= 1");
    const QuantumChannel channel = make_channel(require_key(c, "channel", "secondlaw case"), spec, reference);
    for (int r = 0; r < repeat; ++r) {
      const DensityMatrix rho0 = make_state(require_key(c, "state", "secondlaw case"), spec, reference, rng);
      const SecondLawLedger l = evaluate(rho0, channel, spec, reference, tolerance);
      const std::string id = repeat > 1 ? label + "#" + std::to_string(r) : label;
      table.add({{"case", id},
                 {"ensemble", to_string(l.kind)},
                 {"S_before", num(l.entropy_before)},
                 {"S_after", num(l.entropy_after)},
                 {"E_before", num(l.energy_before)},
                 {"E_after", num(l.energy_after)},
                 {"N_before", num(l.number_before.value_or(std::numeric_limits<double>::quiet_NaN()))},
                 {"N_after", num(l.number_after.value_or(std::numeric_limits<double>::quiet_NaN()))},
                 {"rel_before", num(l.rel_before)},
                 {"rel_after", num(l.rel_after)},
                 {"delta_rel", num(l.delta_rel)},
                 {"clausius_terms", num(l.clausius_terms)},
                 {"identity_residual", num(l.identity_residual)},
                 {"inequality_margin", num(l.inequality_margin)},
                 {"support_violation", l.support_violation ? "true" : "false"},
                 {"verdict", l.pass ? "pass" : "fail"}});
      if (!l.pass) {
        json f = to_json(l);
        f["case"] = id;
        failures.push_back(std::move(f));
      }
    }
  }
  emit(table, g, "secondlaw", out);
  if (!failures.empty()) {
    err << json{{"status", "violation"}, {"tolerance", tolerance}, {"failures", failures}}.dump(2) << "\n";
    return kExitViolation;
  }
  return kExitOk;
}

// ---------------------------------------------------------------- lightcone

DensityMatrix make_chain_state(const json& j, const ChainSpec& chain, Rng& rng) {
  const std::string type = require_key(j, "type", "initial").get<std::string>();
  if (type == "reference") {
    require_keys_subset(j, {"type"}, "initial");
    return build_reference(chain);
  }
  if (type == "flipped") {
    require_keys_subset(j, {"type", "site"}, "initial");
    return flipped_reference(chain, require_key(j, "site", "initial").get<int>());
  }
  if (type == "random") {
    require_keys_subset(j, {"type"}, "initial");
    return random_density_matrix(chain.dim(), rng).with_factors(chain.factor_dims());
  }
  if (type == "random_product") {
    require_keys_subset(j, {"type"}, "initial");
    DensityMatrix rho = random_density_matrix(2, rng);
    for (int s = 1; s < chain.n_sites; ++s) rho = tensor(rho, random_density_matrix(2, rng));
    return rho.with_factors(chain.factor_dims());
  }
  throw PreconditionError("unknown initial state type '" + type + "'");
}

int cmd_lightcone(const std::string& config_path, const GlobalOptions& g, std::ostream& out, std::ostream& err) {
  const json config = load_json(config_path);
  require_keys_subset(config, {"seed", "tolerance", "chain", "lambdas", "region", "steps", "initial"},
                      "lightcone config");
  ChainSpec chain = chain_spec_from_json(require_key(config, "chain", "lightcone config"));
  std::vector<double> lambdas = config.contains("lambdas") ? config.at("lambdas").get<std::vector<double>>()
                                                            : std::vector<double>{chain.lambda};
  const auto region = require_key(config, "region", "lightcone config").get<std::vector<int>>();
  if (region.size() != 2) throw PreconditionError("lightcone config: region must be [first, last]");
  const int steps = require_key(config, "steps", "lightcone config").get<int>();
  const double tolerance = g.tolerance ? *g.tolerance : config.value("tolerance", kLightconeTolerance);
  if (!(tolerance >= 0.0)) throw PreconditionError("tolerance must be >= 0");
  const DiamondSchedule schedule = DiamondSchedule::make({region[0], region[1]}, steps);
  schedule.validate(chain);

  Rng rng(resolve_seed(g, config));
  const DensityMatrix rho0 = make_chain_state(require_key(config, "initial", "lightcone config"), chain, rng);

  Table table;
  json failures = json::array();
  for (double lambda : lambdas) {
    chain.lambda = lambda;
    chain.validate();
    const auto records = run(chain, schedule, rho0);
    std::vector<LocalityRow> locality;
    try {
      locality = locality_report(records);
    } catch (const std::logic_error& e) {
      failures.push_back({{"lambda", lambda}, {"check", "locality_bound"}, {"message", e.what()}});
      continue;
    }
    for (std::size_t k = 0; k < records.size(); ++k) {
      const auto& r = records[k];
      const auto& l = locality[k];
      table.add({{"lambda", lambda},
                 {"tau", r.tau},
                 {"rel_global", num(r.rel_global)},
                 {"rel_local", num(r.rel_local)},
                 {"production", num(r.production)},
                 {"entropy_global", num(r.entropy_global)},
                 {"energy", num(r.energy)},
                 {"outside_drift", num(r.outside_drift)},
                 {"delta_rel_global", num(l.delta_rel_global)},
                 {"delta_rel_local", num(l.delta_rel_local)},
                 {"difference", num(l.difference)},
                 {"bound_margin", num(l.bound_margin)}});
      if (!(r.production <= tolerance)) {
        failures.push_back({{"lambda", lambda}, {"tau", r.tau}, {"check", "monotone"}, {"production", num(r.production)}});
      }
      if (!(l.bound_margin >= -tolerance)) {
        failures.push_back(
            {{"lambda", lambda}, {"tau", r.tau}, {"check", "locality_bound"}, {"bound_margin", num(l.bound_margin)}});
      }
    }
  }
  emit(table, g, "lightcone", out);
  if (!failures.empty()) {
    err << json{{"status", "violation"}, {"tolerance", tolerance}, {"failures", failures}}.dump(2) << "\n";
    return kExitViolation;
  }
  return kExitOk;
}

// ---------------------------------------------------------------- geometry

double max_abs(const geometry::ScalarField& f) {
  double m = 0.0;
  for (double v : f) m = std::max(m, std::abs(v));
  return m;
}

void add_geometry_row(Table& table, int level, const geometry::FieldGrid& fields, const geometry::Diamond& diamond,
                      double& previous_residual) {
  const auto current = geometry::entropy_current(fields);
  const auto balance = geometry::diamond_balance(current, diamond);
  const double ratio = level == 0 ? std::numeric_limits<double>::quiet_NaN() : previous_residual / balance.residual;
  previous_residual = balance.residual;
  table.add({{"level", level},
             {"nx", fields.grid.nx},
             {"dx", num(fields.grid.dx)},
             {"volume_integral", num(balance.volume_integral)},
             {"boundary_integral", num(balance.boundary_integral)},
             {"residual", num(balance.residual)},
             {"ratio", num(ratio)},
             {"max_abs_divergence", num(max_abs(geometry::divergence(current)))},
             {"max_killing_residual", num(max_abs(geometry::killing_residual(fields)))}});
}

int cmd_geometry(const std::string& preset_name, const std::string& config_path, std::optional<int> refine,
                 const GlobalOptions& g, std::ostream& out) {
  Table table;
  double previous = 0.0;
  std::string name = preset_name;
  int levels = refine.value_or(0);
  if (!config_path.empty()) {
    const json config = load_json(config_path);
    require_keys_subset(config, {"preset", "refine", "grid", "diamond"}, "geometry config");
    if (config.contains("grid")) {
      if (config.contains("preset")) throw PreconditionError("geometry config: give either preset or grid");
      if (levels > 0 || config.contains("refine")) {
        throw PreconditionError("geometry config: refinement needs a preset, not an explicit grid");
      }
      const auto fields = geometry::field_grid_from_json(config.at("grid"));
      const json& d = require_key(config, "diamond", "geometry config");
      require_keys_subset(d, {"center_i", "center_j", "half_width"}, "diamond");
      const geometry::Diamond diamond{require_key(d, "center_i", "diamond").get<int>(),
                                      require_key(d, "center_j", "diamond").get<int>(),
                                      require_key(d, "half_width", "diamond").get<int>()};
      add_geometry_row(table, 0, fields, diamond, previous);
      emit(table, g, "geometry", out);
      return kExitOk;
    }
    if (config.contains("diamond")) throw PreconditionError("geometry config: diamond is only used with grid");
    name = require_key(config, "preset", "geometry config").get<std::string>();
    if (!refine) levels = config.value("refine", 0);
  }
  if (levels < 0) throw PreconditionError("--refine must be >= 0");
  for (int level = 0; level <= levels; ++level) {
    add_geometry_row(table, level, geometry::preset(name, level), geometry::preset_diamond(level), previous);
  }
  emit(table, g, "geometry", out);
  return kExitOk;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"relent: relative entropy ledgers, light-cone monotones and entropy-current checks", "relent"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  std::uint64_t seed = 0;
  double tolerance = 0.0;
  auto* seed_opt = app.add_option("--seed", seed, "64-bit seed (overrides the config)");
  auto* tol_opt = app.add_option("--tolerance", tolerance, "Tolerance override for pass/fail checks");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", g.out, "Output file (default: stdout or $RELENT_OUT_DIR/<command>.<format>)");

  int resolution = 0;
  auto* contours = app.add_subcommand("contours", "Relative entropy to the uniform qutrit state on a simplex grid");
  contours->add_option("--resolution", resolution, "Grid resolution R (step 1/R)")->required()->check(CLI::Range(2, 100000));

  std::string secondlaw_config;
  auto* secondlaw = app.add_subcommand("secondlaw", "Second-law ledgers for an ensemble and channels");
  secondlaw->add_option("--config", secondlaw_config, "JSON config")->required();

  std::string lightcone_config;
  auto* lightcone = app.add_subcommand("lightcone", "Causal-diamond chain runs");
  lightcone->add_option("--config", lightcone_config, "JSON config")->required();

  std::string preset;
  std::string geometry_config;
  int refine = 0;
  auto* geometry_cmd = app.add_subcommand("geometry", "Entropy-current balance on causal diamonds");
  auto* preset_opt = geometry_cmd->add_option("--preset", preset, "Preset field grid");
  auto* config_opt = geometry_cmd->add_option("--config", geometry_config, "JSON config");
  preset_opt->excludes(config_opt);
  auto* refine_opt = geometry_cmd->add_option("--refine", refine, "Number of refinement levels");

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "relent: " << e.what() << "\n";
    return kExitError;
  }
  if (*seed_opt) g.seed = seed;
  if (*tol_opt) g.tolerance = tolerance;

  try {
    if (*contours) return cmd_contours(resolution, g, out);
    if (*secondlaw) return cmd_secondlaw(secondlaw_config, g, out, err);
    if (*lightcone) return cmd_lightcone(lightcone_config, g, out, err);
    if (*geometry_cmd) {
      if (preset.empty() && geometry_config.empty()) {
        err << "relent geometry: one of --preset or --config is required\n";
        return kExitError;
      }
      return cmd_geometry(preset, geometry_config, *refine_opt ? std::optional<int>(refine) : std::nullopt, g, out);
    }
  } catch (const std::exception& e) {
    err << "relent: error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace relent::cli
