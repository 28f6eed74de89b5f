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

// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "relent/channels.hpp"
#include "relent/cli.hpp"
#include "relent/ensembles.hpp"
#include "relent/geometry.hpp"
#include "relent/rng.hpp"
#include "relent/secondlaw.hpp"
#include "relent/states.hpp"

namespace {

using namespace relent;

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string config(const std::string& name) { return std::string(RELENT_CONFIG_DIR) + "/" + name; }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// 1. Data processing inequality over Stinespring-random channels.
Outcome monotonicity_suite() {
  Rng rng(1001);
  int ok = 0;
  double worst = 1e300;
  for (int k = 0; k < 500; ++k) {
    const Index d = 2 + k % 7;
    const DensityMatrix rho = random_density_matrix(d, rng);
    const DensityMatrix sigma = random_density_matrix(d, rng);
    const QuantumChannel n = random_channel(d, 1 + rng.uniform_int(1, 3), rng);
    const auto gap = monotonicity_gap(rho, sigma, n);
    if (gap && *gap >= -1e-9) ++ok;
    if (gap) worst = std::min(worst, *gap);
  }
  return {ok == 500, std::to_string(ok) + "/500 gaps >= -1e-9, min gap " + fmt("%.3e", worst)};
}

// 2. Entropy non-decrease under unital channels, and the non-unital counterexample.
Outcome unital_suite() {
  Rng rng(1002);
  int ok = 0;
  double worst = 1e300;
  for (int k = 0; k < 100; ++k) {
    const Index d = 2 + k % 7;
    const DensityMatrix rho = random_density_matrix(d, rng);
    const QuantumChannel n = random_unital_channel(d, 1 + rng.uniform_int(1, 4), rng);
    const double change = von_neumann_entropy(apply(n, rho)) - von_neumann_entropy(rho);
    if (change >= -1e-9) ++ok;
    worst = std::min(worst, change);
  }
  const QuantumChannel m = reset_measurement();
  const DensityMatrix mixed = DensityMatrix::maximally_mixed(2);
  const double before = von_neumann_entropy(mixed);
  const double after = von_neumann_entropy(apply(m, mixed));
  const bool counterexample = before == std::log(2.0) && after == 0.0 && !m.verify().unital_ok();
  return {ok == 100 && counterexample, std::to_string(ok) + "/100 entropy changes >= -1e-9 (min " +
                                           fmt("%.3e", worst) + "); measurement drops ln 2 -> " + fmt("%g", after)};
}

// 3. Ledger identities for the three standard ensembles.
struct LedgerTally {
  int cases = 0;
  int ok = 0;
  int unitary_cases = 0;
  int unitary_ok = 0;
  double worst_residual = 0.0;

  void record(const SecondLawLedger& l, bool unitary) {
    ++cases;
    if (l.identity_residual < 1e-9 && l.delta_rel <= 1e-9) ++ok;
    worst_residual = std::max(worst_residual, l.identity_residual);
    if (unitary) {
      ++unitary_cases;
      if (std::abs(l.delta_rel) < 1e-9) ++unitary_ok;
    }
  }
};

Matrix in_basis(const Matrix& u, const RVector& values) { return u * values.cast<Complex>().asDiagonal() * u.adjoint(); }

Outcome ensemble_suite() {
  Rng rng(1003);
  std::map<std::string, LedgerTally> tally;

  for (int k = 0; k < 50; ++k) {
    const Index d = 2 + k % 5;
    const HermitianOperator h = random_hermitian(d, rng);
    const EnsembleSpec spec = EnsembleSpec::canonical(h, rng.uniform(0.2, 2.0));
    const ReferenceState ref = reference_state(spec);
    const DensityMatrix rho = random_density_matrix(d, rng);
    const int pick = k % 3;
    const QuantumChannel n = pick == 0   ? hamiltonian_evolution(h, rng.uniform(0.0, 5.0))
                             : pick == 1 ? partial_replacement(ref.state, rng.uniform(0.05, 1.0))
                                         : dephasing(h);
    tally["canonical"].record(evaluate(rho, n, spec, ref), pick == 0);
  }

  for (int k = 0; k < 50; ++k) {
    // Commuting H and N through a shared random eigenbasis.
    const Index modes = 1 + k % 2;
    const Index d = Index{1} << modes;
    RVector e(d);
    RVector num(d);
    std::vector<double> eps(static_cast<std::size_t>(modes));
    for (double& x : eps) x = rng.uniform(0.2, 2.0);
    for (Index s = 0; s < d; ++s) {
      e(s) = 0.0;
      num(s) = 0.0;
      for (Index m = 0; m < modes; ++m) {
        if ((s >> m) & 1) {
          e(s) += eps[static_cast<std::size_t>(m)];
          num(s) += 1.0;
        }
      }
    }
    const Matrix u = random_unitary(d, rng);
    const HermitianOperator h(in_basis(u, e));
    const HermitianOperator n_op(in_basis(u, num));
    const EnsembleSpec spec = EnsembleSpec::grand_canonical(h, n_op, rng.uniform(0.2, 2.0), rng.uniform(-0.5, 0.5));
    const ReferenceState ref = reference_state(spec);
    const DensityMatrix rho = random_density_matrix(d, rng);
    const int pick = k % 3;
    const QuantumChannel n = pick == 0   ? hamiltonian_evolution(h, rng.uniform(0.0, 5.0))
                             : pick == 1 ? partial_replacement(ref.state, rng.uniform(0.05, 1.0))
                                         : dephasing(h);
    tally["grand_canonical"].record(evaluate(rho, n, spec, ref), pick == 0);
  }

  for (int k = 0; k < 50; ++k) {
    // Shell of width 0.1 around 1 holding `inner` degenerate levels.
    const Index d = 3 + k % 4;
    const Index inner = 2 + k % static_cast<int>(d - 2);
    RVector e(d);
    for (Index s = 0; s < d; ++s) e(s) = s < inner ? 1.0 : (s % 2 ? rng.uniform(1.5, 3.0) : rng.uniform(-1.0, 0.5));
    const Matrix basis = random_unitary(d, rng);
    const HermitianOperator h(in_basis(basis, e));
    const EnsembleSpec spec = EnsembleSpec::microcanonical(h, {1.0, 0.1});
    const ReferenceState ref = reference_state(spec);
    const Matrix& p = *ref.shell_projector;
    Matrix inside = p * random_density_matrix(d, rng).matrix() * p;
    const DensityMatrix rho(inside / inside.trace().real());
    const int pick = k % 3;
    QuantumChannel n = dephasing(h);
    if (pick == 0) {
      Matrix v = Matrix::Identity(d, d);
      v.topLeftCorner(inner, inner) = random_unitary(inner, rng);
      n = unitary_channel(basis * v * basis.adjoint(), "shell unitary");
    } else if (pick == 1) {
      n = partial_replacement(ref.state, rng.uniform(0.05, 1.0));
    }
    tally["microcanonical"].record(evaluate(rho, n, spec, ref), pick == 0);
  }

  bool pass = true;
  std::ostringstream os;
  for (const auto& [name, t] : tally) {
    pass = pass && t.ok == t.cases && t.cases == 50 && t.unitary_ok == t.unitary_cases;
    os << name << " " << t.ok << "/" << t.cases << " (unitary " << t.unitary_ok << "/" << t.unitary_cases
       << ", max residual " << fmt("%.1e", t.worst_residual) << ") ";
  }
  return {pass, os.str()};
}

// 4. Relative entropy to the uniform qutrit state on the simplex.
Outcome contour_suite() {
  const int r = 201;
  const auto grid = contour_grid(r);
  std::vector<double> value(static_cast<std::size_t>((r + 1) * (r + 1)), std::nan(""));
  auto at = [&](int i, int j) -> double& { return value[static_cast<std::size_t>(i * (r + 1) + j)]; };
  std::size_t n = 0;
  for (int i = 0; i <= r; ++i) {
    for (int j = 0; j <= r - i; ++j) at(i, j) = grid[n++].rel_entropy;
  }
  const double center = at(r / 3, r / 3);
  const double ln3 = std::log(3.0);
  double vertex_err = 0.0;
  for (auto [i, j] : {std::pair{r, 0}, std::pair{0, r}, std::pair{0, 0}}) vertex_err = std::max(vertex_err, std::abs(at(i, j) - ln3));

  double symmetry_err = 0.0;
  double identity_err = 0.0;
  n = 0;
  for (int i = 0; i <= r; ++i) {
    for (int j = 0; j <= r - i; ++j) {
      const int k = r - i - j;
      std::array<int, 3> idx{i, j, k};
      std::sort(idx.begin(), idx.end());
      do {
        symmetry_err = std::max(symmetry_err, std::abs(at(idx[0], idx[1]) - at(i, j)));
      } while (std::next_permutation(idx.begin(), idx.end()));
      const auto& p = grid[n++];
      double shannon = 0.0;
      for (double q : {p.p1, p.p2, p.p3}) {
        if (q > 0.0) shannon -= q * std::log(q);
      }
      identity_err = std::max(identity_err, std::abs(p.rel_entropy - (ln3 - shannon)));
    }
  }
  const bool pass = grid.size() == 20503 && std::abs(center) <= 1e-12 && vertex_err <= 1e-12 && symmetry_err <= 1e-12 &&
                    identity_err <= 1e-12;
  return {pass, std::to_string(grid.size()) + " points, center " + fmt("%.1e", center) + ", vertex err " +
                    fmt("%.1e", vertex_err) + ", symmetry err " + fmt("%.1e", symmetry_err) + ", identity err " +
                    fmt("%.1e", identity_err)};
}

// 5 and 6 share one set of light-cone runs through the CLI.
struct LightconeRows {
  int code = -1;
  nlohmann::json rows;
  std::string err;
};

LightconeRows lightcone_demo() {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run_cli({"--format", "json", "lightcone", "--config", config("lightcone_demo.json")}, out, err);
  LightconeRows r{code, nlohmann::json::array(), err.str()};
  if (code != cli::kExitError) r.rows = nlohmann::json::parse(out.str());
  return r;
}

double as_double(const nlohmann::json& v) {
  if (v.is_number()) return v.get<double>();
  return std::stod(v.get<std::string>());
}

Outcome lightcone_monotone(const LightconeRows& lc) {
  if (lc.code == cli::kExitError) return {false, "run failed: " + lc.err};
  std::map<double, int> rows_per_lambda;
  int increases = 0;
  int zero_coupling_bad = 0;
  double max_drift = 0.0;
  double max_zero_production = 0.0;
  for (const auto& row : lc.rows) {
    const double lambda = as_double(row["lambda"]);
    ++rows_per_lambda[lambda];
    const double production = as_double(row["production"]);
    if (production > 1e-9) ++increases;
    if (lambda == 0.0) {
      max_zero_production = std::max(max_zero_production, std::abs(production));
      if (std::abs(production) >= 1e-9) ++zero_coupling_bad;
    }
    max_drift = std::max(max_drift, as_double(row["outside_drift"]));
  }
  const bool all_lambdas = rows_per_lambda.size() == 4 && rows_per_lambda.count(0.0) && rows_per_lambda.count(0.1) &&
                           rows_per_lambda.count(0.5) && rows_per_lambda.count(1.0);
  bool eleven_each = true;
  for (const auto& [lambda, count] : rows_per_lambda) eleven_each = eleven_each && count == 11;
  const bool pass = lc.code == cli::kExitOk && all_lambdas && eleven_each && increases == 0 && zero_coupling_bad == 0 &&
                    max_drift <= 1e-10;
  return {pass, std::to_string(lc.rows.size()) + " rows over " + std::to_string(rows_per_lambda.size()) +
                    " couplings, increases " + std::to_string(increases) + ", max |production| at lambda 0 " +
                    fmt("%.1e", max_zero_production) + ", max outside drift " + fmt("%.1e", max_drift)};
}

Outcome lightcone_local_bound(const LightconeRows& lc) {
  if (lc.code == cli::kExitError) return {false, "run failed: " + lc.err};
  int violations = 0;
  double max_difference = 0.0;
  bool has_difference = true;
  for (const auto& row : lc.rows) {
    if (as_double(row["rel_local"]) > as_double(row["rel_global"]) + 1e-9) ++violations;
    has_difference = has_difference && row.contains("difference");
    if (row.contains("difference")) max_difference = std::max(max_difference, std::abs(as_double(row["difference"])));
  }
  return {violations == 0 && has_difference && !lc.rows.empty(),
          std::to_string(violations) + " bound violations; difference column emitted, max |difference| " +
              fmt("%.2e", max_difference) + " (reported, not asserted)"};
}

// 7. Geometry: second-order balance, equilibrium current, Killing residual.
Outcome geometry_suite() {
  std::vector<double> residuals;
  for (int level = 0; level <= 3; ++level) {
    const auto s = geometry::entropy_current(geometry::preset("divergence_free", level));
    residuals.push_back(geometry::diamond_balance(s, geometry::preset_diamond(level)).residual);
  }
  bool ratios_ok = true;
  std::string ratios;
  for (std::size_t k = 1; k < residuals.size(); ++k) {
    const double ratio = residuals[k - 1] / residuals[k];
    ratios_ok = ratios_ok && ratio >= 3.3 && ratio <= 4.7;
    ratios += (k > 1 ? ", " : "") + fmt("%.3f", ratio);
  }

  const geometry::FluidState st{3.0, 1.0, 0.5, 1.2, 0.4};
  const auto fluid = geometry::ideal_fluid(geometry::preset("vacuum", 1).grid, st, 0.0);
  const auto s = geometry::entropy_current(fluid);
  const double expected = (st.energy_density + st.pressure - st.chemical_potential * st.number_density) / st.temperature;
  double current_err = 0.0;
  for (std::size_t k = 0; k < s.c0.size(); ++k) {
    current_err = std::max({current_err, std::abs(s.c0[k] - expected), std::abs(s.c1[k])});
  }
  double div = 0.0;
  for (double v : geometry::divergence(s)) div = std::max(div, std::abs(v));
  double killing = 0.0;
  for (double v : geometry::killing_residual(fluid)) killing = std::max(killing, std::abs(v));

  const bool pass = ratios_ok && current_err <= 1e-10 && div < 1e-10 && killing < 1e-12;
  return {pass, "refinement ratios " + ratios + "; rest current err " + fmt("%.1e", current_err) + ", divergence " +
                    fmt("%.1e", div) + ", Killing residual " + fmt("%.1e", killing)};
}

// 8. Byte-identical reruns of every demo config.
Outcome determinism_suite() {
  int compared = 0;
  int identical = 0;
  std::string mismatches;
  auto check = [&](const std::vector<std::string>& args, const std::string& label) {
    std::ostringstream a, b, ea, eb;
    const int ca = cli::run_cli(args, a, ea);
    const int cb = cli::run_cli(args, b, eb);
    ++compared;
    if (ca == cb && a.str() == b.str() && !a.str().empty()) {
      ++identical;
    } else {
      mismatches += " " + label;
    }
  };
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(RELENT_CONFIG_DIR)) {
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& path : files) {
    const std::string stem = path.stem().string();
    const std::string command = stem.substr(0, stem.find('_'));
    if (stem == "secondlaw_not_fixed") continue;  // rejected config, no table
    check({command, "--config", path.string()}, stem);
  }
  check({"contours", "--resolution", "201"}, "contours");
  return {identical == compared && compared > 1,
          std::to_string(identical) + "/" + std::to_string(compared) + " outputs byte-identical" + mismatches};
}

}  // namespace

int main() {
  using clock = std::chrono::steady_clock;
  int failures = 0;
  auto report = [&](int id, const char* name, double limit_s, const std::function<Outcome()>& body) {
    const auto t0 = clock::now();
    Outcome o;
    try {
      o = body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(clock::now() - t0).count();
    const bool in_time = limit_s <= 0.0 || secs < limit_s;
    const bool pass = o.pass && in_time;
    if (!pass) ++failures;
    std::printf("criterion %d [%s] %s: %s; %.2f s%s\n", id, pass ? "PASS" : "FAIL", name, o.detail.c_str(), secs,
                in_time ? "" : " (over time budget)");
    std::fflush(stdout);
  };

  report(1, "monotonicity", 10.0, monotonicity_suite);
  report(2, "unital entropy", 2.0, unital_suite);
  report(3, "ensemble ledgers", 5.0, ensemble_suite);
  report(4, "simplex contours", 1.0, contour_suite);
  LightconeRows lc;
  const auto t0 = clock::now();
  report(5, "light-cone monotone", 60.0, [&] {
    lc = lightcone_demo();
    return lightcone_monotone(lc);
  });
  const double lc_secs = std::chrono::duration<double>(clock::now() - t0).count();
  report(6, "relative entanglement bound", 60.0 - lc_secs, [&] { return lightcone_local_bound(lc); });
  report(7, "geometry convergence", 5.0, geometry_suite);
  report(8, "determinism", 0.0, determinism_suite);
  std::printf("%s: %d of 8 criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
