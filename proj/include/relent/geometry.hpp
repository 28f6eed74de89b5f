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
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace relent::geometry {

/// Uniform 1+1-d grid, metric diag(-1, +1), coordinates x^0 = t, x^1 = x.
/// Point (j, i) sits at t = t0 + j dt, x = x0 + i dx; storage is row-major
/// with one row per time slice.
struct GridShape {
  int nx = 0;
  int nt = 0;
  double dx = 1.0;
  double dt = 1.0;
  double x0 = 0.0;
  double t0 = 0.0;

  std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(nt); }
  std::size_t index(int j, int i) const { return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx) + static_cast<std::size_t>(i); }
  double x(int i) const { return x0 + i * dx; }
  double t(int j) const { return t0 + j * dt; }
  void validate() const;
};

using ScalarField = std::vector<double>;

/// Contravariant vector field (upper index components).
struct VectorField {
  GridShape grid;
  ScalarField c0;
  ScalarField c1;
};

/// Fluid data on the grid. beta_0, beta_1 are the covariant (lower index)
/// components of beta_nu. w, when present, replaces p beta^mu in the entropy
/// current.
struct FieldGrid {
  GridShape grid;
  ScalarField T00, T01, T11;
  ScalarField N0, N1;
  ScalarField beta_0, beta_1;
  ScalarField alpha;
  ScalarField pressure;
  std::optional<VectorField> w;

  void validate() const;
};

/// s^mu = -beta_nu T^{mu nu} - alpha N^mu + p beta^mu  (or + w^mu when given).
VectorField entropy_current(const FieldGrid& fields);

/// d_t c0 + d_x c1: second-order centred differences inside, second-order
/// one-sided at the edges. Needs at least 3 points per axis.
ScalarField divergence(const VectorField& field);

/// Per point: max_{mu,nu} |d_mu beta_nu + d_nu beta_mu| + |d alpha|.
ScalarField killing_residual(const FieldGrid& fields);

/// Causal diamond |i - center_i| + |j - center_j| <= half_width in grid units.
struct Diamond {
  int center_i = 0;
  int center_j = 0;
  int half_width = 1;
};

struct DiamondBalance {
  double volume_integral = 0.0;
  double boundary_integral = 0.0;
  double residual = 0.0;
};

/// Volume integral of the discrete divergence against the boundary flux
/// through the two cones. Each cone segment is replaced by a staircase of unit
/// grid edges (horizontal step first, which keeps the enclosed area at exactly
/// 2 half_width^2 cells). Boundary elements dSigma_0 = dx, dSigma_1 = -dt are
/// taken along the staircase traversed counter-clockwise in the (x, t) plane,
/// which gives n^0 < 0 on the future cone and n^0 > 0 on the past cone.
/// time_reversed swaps the roles of the two cones and flips the sign of the
/// boundary integral. The cones are light-like when dx == dt.
DiamondBalance diamond_balance(const VectorField& current, const Diamond& diamond, bool time_reversed = false);

/// Closed staircase boundary (grid points, first == last) used by diamond_balance.
std::vector<std::pair<int, int>> diamond_staircase(const Diamond& diamond);

/// Named presets on [-2, 2] x [-2, 2] with 16 * 2^level + 1 points per axis:
/// vacuum, rest_fluid, boosted_fluid, gradient_beta, killing_flow, divergence_free.
FieldGrid preset(const std::string& name, int level);
std::vector<std::string> preset_names();
/// Diamond centred at the origin with half width 1.5 for the preset grids.
Diamond preset_diamond(int level);

/// Thermodynamic state used by the fluid presets (mu = alpha T).
struct FluidState {
  double energy_density;
  double pressure;
  double number_density;
  double temperature;
  double chemical_potential;
};

/// Ideal-fluid fields with uniform state and velocity v on a given grid.
FieldGrid ideal_fluid(const GridShape& grid, const FluidState& state, double velocity);

nlohmann::json to_json(const FieldGrid& fields);
FieldGrid field_grid_from_json(const nlohmann::json& j);

}  // namespace relent::geometry
