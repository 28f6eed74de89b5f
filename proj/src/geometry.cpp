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

#include "relent/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "relent/error.hpp"
#include "relent/json_util.hpp"

namespace relent::geometry {

namespace {

constexpr double kSymmetryTolerance = 1e-12;
constexpr double kDomainHalfLength = 2.0;
constexpr double kPresetDiamondHalfWidth = 1.5;

void require_size(const ScalarField& f, const GridShape& g, const char* name) {
  if (f.size() != g.size()) {
    std::ostringstream os;
    os << "field '" << name << "' has " << f.size() << " values, grid needs " << g.size();
    throw PreconditionError(os.str());
  }
}

/// d/dt (axis 0) or d/dx (axis 1) of f.
ScalarField partial(const ScalarField& f, const GridShape& g, int axis) {
  ScalarField out(g.size());
  const int n = axis == 0 ? g.nt : g.nx;
  const double h = axis == 0 ? g.dt : g.dx;
  for (int j = 0; j < g.nt; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      auto at = [&](int k) { return axis == 0 ? f[g.index(k, i)] : f[g.index(j, k)]; };
      const int k = axis == 0 ? j : i;
      double d = 0.0;
      if (k == 0) {
        // -3 f0 + 4 f1 - f2, grouped so constants cancel exactly
        d = (4.0 * (at(1) - at(0)) - (at(2) - at(0))) / (2.0 * h);
      } else if (k == n - 1) {
        d = (4.0 * (at(n - 1) - at(n - 2)) - (at(n - 1) - at(n - 3))) / (2.0 * h);
      } else {
        d = (at(k + 1) - at(k - 1)) / (2.0 * h);
      }
      out[g.index(j, i)] = d;
    }
  }
  return out;
}

void require_derivable(const GridShape& g) {
  if (g.nx < 3 || g.nt < 3) throw PreconditionError("finite differences need at least 3 points per axis");
}

GridShape preset_shape(int level) {
  if (level < 0 || level > 8) throw PreconditionError("preset refinement level must lie in [0, 8]");
  GridShape g;
  g.nx = g.nt = 16 * (1 << level) + 1;
  g.dx = g.dt = 2.0 * kDomainHalfLength / (g.nx - 1);
  g.x0 = g.t0 = -kDomainHalfLength;
  return g;
}

FieldGrid zero_fields(const GridShape& g) {
  FieldGrid f;
  f.grid = g;
  for (auto* field : {&f.T00, &f.T01, &f.T11, &f.N0, &f.N1, &f.beta_0, &f.beta_1, &f.alpha, &f.pressure}) {
    field->assign(g.size(), 0.0);
  }
  return f;
}

ScalarField read_field(const nlohmann::json& fields, const char* name, const GridShape& g, bool required) {
  if (!fields.contains(name)) {
    if (required) throw PreconditionError(std::string("field grid: missing required field '") + name + "'");
    return {};
  }
  ScalarField f = fields.at(name).get<ScalarField>();
  require_size(f, g, name);
  return f;
}

}  // namespace

void GridShape::validate() const {
  if (nx < 1 || nt < 1) throw PreconditionError("grid sizes must be positive");
  if (!(dx > 0.0) || !(dt > 0.0)) throw PreconditionError("grid spacings must be > 0");
}

void FieldGrid::validate() const {
  grid.validate();
  require_size(T00, grid, "T00");
  require_size(T01, grid, "T01");
  require_size(T11, grid, "T11");
  require_size(N0, grid, "N0");
  require_size(N1, grid, "N1");
  require_size(beta_0, grid, "beta_0");
  require_size(beta_1, grid, "beta_1");
  require_size(alpha, grid, "alpha");
  if (!w) require_size(pressure, grid, "p");
  if (w) {
    require_size(w->c0, grid, "w0");
    require_size(w->c1, grid, "w1");
  }
}

VectorField entropy_current(const FieldGrid& f) {
  f.validate();
  VectorField s{f.grid, ScalarField(f.grid.size()), ScalarField(f.grid.size())};
  for (std::size_t k = 0; k < f.grid.size(); ++k) {
    // beta^0 = -beta_0, beta^1 = beta_1
    const double b0 = f.beta_0[k];
    const double b1 = f.beta_1[k];
    const double extra0 = f.w ? f.w->c0[k] : f.pressure[k] * (-b0);
    const double extra1 = f.w ? f.w->c1[k] : f.pressure[k] * b1;
    s.c0[k] = -(b0 * f.T00[k] + b1 * f.T01[k]) - f.alpha[k] * f.N0[k] + extra0;
    s.c1[k] = -(b0 * f.T01[k] + b1 * f.T11[k]) - f.alpha[k] * f.N1[k] + extra1;
  }
  return s;
}

ScalarField divergence(const VectorField& field) {
  field.grid.validate();
  require_derivable(field.grid);
  require_size(field.c0, field.grid, "c0");
  require_size(field.c1, field.grid, "c1");
  ScalarField out = partial(field.c0, field.grid, 0);
  const ScalarField dx1 = partial(field.c1, field.grid, 1);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] += dx1[k];
  return out;
}

ScalarField killing_residual(const FieldGrid& f) {
  f.grid.validate();
  require_derivable(f.grid);
  require_size(f.beta_0, f.grid, "beta_0");
  require_size(f.beta_1, f.grid, "beta_1");
  require_size(f.alpha, f.grid, "alpha");
  const auto& g = f.grid;
  const ScalarField d0b0 = partial(f.beta_0, g, 0);
  const ScalarField d1b0 = partial(f.beta_0, g, 1);
  const ScalarField d0b1 = partial(f.beta_1, g, 0);
  const ScalarField d1b1 = partial(f.beta_1, g, 1);
  const ScalarField d0a = partial(f.alpha, g, 0);
  const ScalarField d1a = partial(f.alpha, g, 1);
  ScalarField out(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double sym = std::max({std::abs(2.0 * d0b0[k]), std::abs(2.0 * d1b1[k]), std::abs(d0b1[k] + d1b0[k])});
    out[k] = sym + std::hypot(d0a[k], d1a[k]);
  }
  return out;
}

std::vector<std::pair<int, int>> diamond_staircase(const Diamond& d) {
  // Counter-clockwise in (x, t) from the past vertex; every unit step is
  // horizontal first, so the polygon sits outside the lower-right and
  // upper-left cone segments and inside the other two.
  const int h = d.half_width;
  const int moves[4][2][2] = {{{1, 0}, {0, 1}}, {{-1, 0}, {0, 1}}, {{-1, 0}, {0, -1}}, {{1, 0}, {0, -1}}};
  std::vector<std::pair<int, int>> path{{d.center_i, d.center_j - h}};
  for (const auto& edge : moves) {
    for (int m = 0; m < h; ++m) {
      for (const auto& step : edge) {
        const auto [i, j] = path.back();
        path.emplace_back(i + step[0], j + step[1]);
      }
    }
  }
  return path;
}

DiamondBalance diamond_balance(const VectorField& current, const Diamond& d, bool time_reversed) {
  const auto& g = current.grid;
  g.validate();
  if (d.half_width < 1) throw PreconditionError("diamond half width must be >= 1");
  if (d.center_i - d.half_width <= 0 || d.center_i + d.half_width >= g.nx - 1 || d.center_j - d.half_width <= 0 ||
      d.center_j + d.half_width >= g.nt - 1) {
    throw PreconditionError("diamond touches the grid edge");
  }
  const ScalarField div = divergence(current);

  // Cells enclosed by the staircase, divergence averaged over the four corners.
  const int h = d.half_width;
  double volume = 0.0;
  for (int j = d.center_j - h; j < d.center_j + h; ++j) {
    for (int i = d.center_i - h; i < d.center_i + h; ++i) {
      const double a = i + 0.5 - d.center_i;
      const double b = j + 0.5 - d.center_j;
      const double r = std::abs(a) + std::abs(b);
      if (r > h - 0.5 && !(r < h + 0.5 && a * b < 0.0)) continue;
      const double sum = div[g.index(j, i)] + div[g.index(j, i + 1)] + div[g.index(j + 1, i)] + div[g.index(j + 1, i + 1)];
      volume += g.dx * g.dt * sum / 4.0;
    }
  }

  const auto path = diamond_staircase(d);
  const double sign = time_reversed ? -1.0 : 1.0;
  double boundary = 0.0;
  for (std::size_t e = 0; e + 1 < path.size(); ++e) {
    const auto [ia, ja] = path[e];
    const auto [ib, jb] = path[e + 1];
    const std::size_t a = g.index(ja, ia);
    const std::size_t b = g.index(jb, ib);
    // Trapezoid per edge; dSigma_0 = dx along the edge, dSigma_1 = -dt.
    const double s0 = 0.5 * (current.c0[a] + current.c0[b]);
    const double s1 = 0.5 * (current.c1[a] + current.c1[b]);
    boundary += sign * (s1 * ((jb - ja) * g.dt) - s0 * ((ib - ia) * g.dx));
  }
  return {volume, boundary, std::abs(volume - boundary)};
}

FieldGrid ideal_fluid(const GridShape& g, const FluidState& st, double velocity) {
  if (!(std::abs(velocity) < 1.0)) throw PreconditionError("fluid velocity must satisfy |v| < 1");
  FieldGrid f = zero_fields(g);
  const double gamma = 1.0 / std::sqrt(1.0 - velocity * velocity);
  const double u0 = gamma;
  const double u1 = gamma * velocity;
  const double enthalpy = st.energy_density + st.pressure;
  for (std::size_t k = 0; k < g.size(); ++k) {
    // T^{mu nu} = (e + p) u^mu u^nu + p eta^{mu nu}, eta = diag(-1, 1)
    f.T00[k] = enthalpy * u0 * u0 - st.pressure;
    f.T01[k] = enthalpy * u0 * u1;
    f.T11[k] = enthalpy * u1 * u1 + st.pressure;
    f.N0[k] = st.number_density * u0;
    f.N1[k] = st.number_density * u1;
    if (st.temperature > 0.0) {
      f.beta_0[k] = -u0 / st.temperature;
      f.beta_1[k] = u1 / st.temperature;
      f.alpha[k] = st.chemical_potential / st.temperature;
    }
    f.pressure[k] = st.pressure;
  }
  return f;
}

std::vector<std::string> preset_names() {
  return {"vacuum", "rest_fluid", "boosted_fluid", "gradient_beta", "killing_flow", "divergence_free"};
}

Diamond preset_diamond(int level) {
  const GridShape g = preset_shape(level);
  const int center = (g.nx - 1) / 2;
  return {center, center, static_cast<int>(std::lround(kPresetDiamondHalfWidth / g.dx))};
}

FieldGrid preset(const std::string& name, int level) {
  const GridShape g = preset_shape(level);
  const FluidState rest{3.0, 1.0, 0.5, 1.0, 0.4};
  if (name == "vacuum") return zero_fields(g);
  if (name == "rest_fluid") return ideal_fluid(g, rest, 0.0);
  if (name == "boosted_fluid") return ideal_fluid(g, rest, 0.5);
  if (name == "gradient_beta") {
    // Fluid at rest with p = e = T^2 and a temperature profile moving in x - 0.3 t.
    FieldGrid f = zero_fields(g);
    for (int j = 0; j < g.nt; ++j) {
      for (int i = 0; i < g.nx; ++i) {
        const std::size_t k = g.index(j, i);
        const double temp = 1.0 + 0.2 * std::sin(g.x(i) - 0.3 * g.t(j));
        const double p = temp * temp;
        f.T00[k] = p;
        f.T11[k] = p;
        f.pressure[k] = p;
        f.beta_0[k] = -1.0 / temp;
      }
    }
    return f;
  }
  if (name == "killing_flow") {
    // beta_nu = a_nu + omega_{nu mu} x^mu with antisymmetric omega: a Killing field.
    FieldGrid f = zero_fields(g);
    const double omega = 0.1;
    for (int j = 0; j < g.nt; ++j) {
      for (int i = 0; i < g.nx; ++i) {
        const std::size_t k = g.index(j, i);
        f.beta_0[k] = -1.0 + omega * g.x(i);
        f.beta_1[k] = 0.2 - omega * g.t(j);
        f.alpha[k] = 0.3;
      }
    }
    return f;
  }
  if (name == "divergence_free") {
    // w^mu = (d_x psi, -d_t psi) for psi = sin(x + 0.3) sin(0.7 t + 0.2); all other fields zero.
    FieldGrid f = zero_fields(g);
    VectorField w{g, ScalarField(g.size()), ScalarField(g.size())};
    for (int j = 0; j < g.nt; ++j) {
      for (int i = 0; i < g.nx; ++i) {
        const std::size_t k = g.index(j, i);
        const double x = g.x(i);
        const double t = g.t(j);
        w.c0[k] = std::cos(x + 0.3) * std::sin(0.7 * t + 0.2);
        w.c1[k] = -0.7 * std::sin(x + 0.3) * std::cos(0.7 * t + 0.2);
      }
    }
    f.w = std::move(w);
    return f;
  }
  throw PreconditionError("unknown geometry preset '" + name + "'");
}

nlohmann::json to_json(const FieldGrid& f) {
  nlohmann::json fields{{"T00", f.T00}, {"T01", f.T01}, {"T11", f.T11},       {"N0", f.N0},
                        {"N1", f.N1},   {"beta_0", f.beta_0}, {"beta_1", f.beta_1}, {"alpha", f.alpha},
                        {"p", f.pressure}};
  if (f.w) {
    fields["w0"] = f.w->c0;
    fields["w1"] = f.w->c1;
  }
  return {{"nx", f.grid.nx}, {"nt", f.grid.nt}, {"dx", f.grid.dx}, {"dt", f.grid.dt},
          {"x0", f.grid.x0}, {"t0", f.grid.t0}, {"fields", fields}};
}

FieldGrid field_grid_from_json(const nlohmann::json& j) {
  require_keys_subset(j, {"nx", "nt", "dx", "dt", "x0", "t0", "fields"}, "field grid");
  FieldGrid f;
  f.grid.nx = require_key(j, "nx", "field grid").get<int>();
  f.grid.nt = require_key(j, "nt", "field grid").get<int>();
  f.grid.dx = require_key(j, "dx", "field grid").get<double>();
  f.grid.dt = require_key(j, "dt", "field grid").get<double>();
  f.grid.x0 = j.value("x0", 0.0);
  f.grid.t0 = j.value("t0", 0.0);
  f.grid.validate();
  const auto& fields = require_key(j, "fields", "field grid");
  require_keys_subset(fields, {"T00", "T01", "T10", "T11", "N0", "N1", "beta_0", "beta_1", "alpha", "p", "w0", "w1"},
                      "field grid fields");
  f.T00 = read_field(fields, "T00", f.grid, true);
  f.T01 = read_field(fields, "T01", f.grid, true);
  f.T11 = read_field(fields, "T11", f.grid, true);
  const ScalarField t10 = read_field(fields, "T10", f.grid, false);
  for (std::size_t k = 0; k < t10.size(); ++k) {
    if (std::abs(t10[k] - f.T01[k]) > kSymmetryTolerance) {
      throw PreconditionError("energy-momentum tensor is not symmetric (T01 != T10)");
    }
  }
  f.N0 = read_field(fields, "N0", f.grid, true);
  f.N1 = read_field(fields, "N1", f.grid, true);
  f.beta_0 = read_field(fields, "beta_0", f.grid, true);
  f.beta_1 = read_field(fields, "beta_1", f.grid, true);
  f.alpha = read_field(fields, "alpha", f.grid, true);
  const bool has_w = fields.contains("w0") || fields.contains("w1");
  f.pressure = read_field(fields, "p", f.grid, !has_w);
  if (f.pressure.empty()) f.pressure.assign(f.grid.size(), 0.0);
  if (has_w) {
    f.w = VectorField{f.grid, read_field(fields, "w0", f.grid, true), read_field(fields, "w1", f.grid, true)};
  }
  f.validate();
  return f;
}

}  // namespace relent::geometry
