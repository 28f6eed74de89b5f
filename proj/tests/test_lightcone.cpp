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

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "relent/error.hpp"
#include "relent/lightcone.hpp"
#include "relent/rng.hpp"
#include "test_util.hpp"

namespace relent {
namespace {

using testing::max_abs_diff;

constexpr double kQubitGround = 0.7310585786300049;

ChainSpec chain(int n, double lambda, double theta) {
  ChainSpec c;
  c.n_sites = n;
  c.fields.assign(static_cast<std::size_t>(n), 1.0);
  c.beta = 1.0;
  c.lambda = lambda;
  c.gate_time = theta;
  return c;
}

TEST(Lightcone, ReferenceIsProductGibbs) {
  const DensityMatrix one = build_reference(chain(1, 0, 0));
  EXPECT_NEAR(one.matrix()(0, 0).real(), kQubitGround, 1e-15);
  const DensityMatrix two = build_reference(chain(2, 0, 0));
  EXPECT_LT(max_abs_diff(two.matrix(), tensor(one, one).matrix()), 1e-15);

  ChainSpec varied = chain(4, 0, 0);
  varied.fields = {0.3, 1.0, 1.7, 0.5};
  const DensityMatrix sigma = build_reference(varied);
  double sum = 0.0;
  for (Index s = 0; s < 4; ++s) {
    const std::vector<Index> keep{s};
    sum += von_neumann_entropy(partial_trace(sigma, keep));
  }
  EXPECT_NEAR(von_neumann_entropy(sigma), sum, 1e-10);
  const std::vector<Index> keep{0};
  EXPECT_NEAR(partial_trace(sigma, keep).matrix()(0, 0).real(), 1.0 / (1.0 + std::exp(-0.3)), 1e-14);
}

TEST(Lightcone, HoppingGateConservesNumber) {
  const Matrix g = hopping_gate(0.37);
  EXPECT_LT(max_abs_diff(g * g.adjoint(), Matrix::Identity(4, 4)), 1e-15);
  const Matrix n = HermitianOperator::diagonal(std::vector<double>{0, 1, 1, 2}).matrix();
  EXPECT_LT(commutator_norm(g, n), 1e-15);
}

TEST(Lightcone, ScheduleShape) {
  const DiamondSchedule s = DiamondSchedule::make({1, 6}, 10);
  ASSERT_EQ(s.steps.size(), 10u);
  const int widths[10] = {2, 3, 4, 5, 6, 6, 5, 4, 3, 2};
  for (int k = 0; k < 10; ++k) {
    EXPECT_EQ(s.steps[k].slice.size(), widths[k]) << "step " << k;
    EXPECT_TRUE(s.region.contains(s.steps[k].slice));
  }
  EXPECT_NO_THROW(s.validate(chain(8, 0, 0)));
  EXPECT_THROW(s.validate(chain(6, 0, 0)), PreconditionError);

  DiamondSchedule broken = s;
  broken.steps[2].slice = {0, 3};
  EXPECT_THROW(broken.validate(chain(8, 0, 0)), PreconditionError);
}

TEST(Lightcone, RejectsGateBetweenUnequalFields) {
  ChainSpec c = chain(3, 0.2, 0.5);
  c.fields = {1.0, 1.4, 1.0};
  const DiamondSchedule s = DiamondSchedule::make({0, 2}, 3);
  EXPECT_THROW(step_map(c, s.steps[1], 0.2), PreconditionError);
  c.gate_time = 0.0;
  EXPECT_NO_THROW(step_map(c, s.steps[1], 0.2));
}

TEST(Lightcone, StepChannelProperties) {
  const ChainSpec c = chain(3, 0.0, 0.6);
  const DiamondSchedule s = DiamondSchedule::make({0, 2}, 3);
  const QuantumChannel unitary = step_channel(c, s.steps[1], 0.0);
  ASSERT_EQ(unitary.kraus().size(), 1u);
  const Matrix& u = unitary.kraus()[0];
  EXPECT_LT(max_abs_diff(u * u.adjoint(), Matrix::Identity(8, 8)), 1e-10);

  const ChainSpec still = chain(3, 1.0, 0.0);
  const QuantumChannel reset = step_channel(still, s.steps[1], 1.0);
  const DensityMatrix sigma = build_reference(still);
  EXPECT_LT(fixed_point_residual(reset, sigma), 1e-10);
  Rng rng(51);
  const DensityMatrix rho = random_density_matrix(8, rng).with_factors(still.factor_dims());
  const DensityMatrix out = apply(reset, rho);
  const std::vector<Index> site{1};
  EXPECT_LT(max_abs_diff(partial_trace(out, site).matrix(), partial_trace(sigma, site).matrix()), 1e-14);

  const QuantumChannel noisy = step_channel(chain(3, 0.3, 0.6), s.steps[1], 0.3);
  EXPECT_TRUE(noisy.verify(&sigma).passes());
}

TEST(Lightcone, LocalStepMatchesDenseChannel) {
  const ChainSpec c = chain(4, 0.3, 0.45);
  const DiamondSchedule s = DiamondSchedule::make({0, 3}, 4);
  Rng rng(52);
  const DensityMatrix rho = random_density_matrix(16, rng).with_factors(c.factor_dims());
  for (const auto& step : s.steps) {
    const DensityMatrix local = step_map(c, step, 0.3).apply(rho);
    const DensityMatrix dense = apply(step_channel(c, step, 0.3), rho);
    EXPECT_LT(max_abs_diff(local.matrix(), dense.matrix()), 1e-13);
  }
}

TEST(Lightcone, ReferenceInitialStateStaysPut) {
  const ChainSpec c = chain(5, 0.4, 0.5);
  const DiamondSchedule s = DiamondSchedule::make({1, 3}, 5);
  for (const auto& r : run(c, s, build_reference(c))) {
    EXPECT_NEAR(r.rel_global, 0.0, 1e-12);
    EXPECT_NEAR(r.production, 0.0, 1e-12);
  }
}

TEST(Lightcone, FlippedSiteRelaxesStrictly) {
  ChainSpec c = chain(6, 0.4, 0.5);
  const DiamondSchedule s = DiamondSchedule::make({1, 4}, 8);
  const auto records = run(c, s, flipped_reference(c, 2));
  for (std::size_t k = 1; k < records.size(); ++k) {
    EXPECT_LT(records[k].rel_global, records[k - 1].rel_global) << "tau " << k;
  }
  for (const auto& r : records) EXPECT_LT(r.outside_drift, 1e-10);
}

TEST(Lightcone, UnitaryRunKeepsRelativeEntropy) {
  const ChainSpec c = chain(6, 0.0, 0.7);
  const DiamondSchedule s = DiamondSchedule::make({1, 4}, 6);
  Rng rng(53);
  const auto records = run(c, s, random_density_matrix(64, rng).with_factors(c.factor_dims()));
  for (const auto& r : records) {
    EXPECT_NEAR(r.rel_global, records.front().rel_global, 1e-9);
    EXPECT_LT(std::abs(r.production), 1e-9);
  }
  for (const auto& row : locality_report(records)) {
    EXPECT_LT(std::abs(row.delta_rel_global), 1e-9);
  }
}

TEST(Lightcone, LocalBoundHoldsOnProductStart) {
  const ChainSpec c = chain(6, 0.3, 0.5);
  const DiamondSchedule s = DiamondSchedule::make({1, 4}, 6);
  Rng rng(54);
  // rho_A (x) sigma_complement
  DensityMatrix rho = build_reference(chain(1, 0, 0));
  rho = tensor(rho, random_density_matrix(16, rng));
  rho = tensor(rho, build_reference(chain(1, 0, 0)));
  const auto records = run(c, s, rho.with_factors(c.factor_dims()));
  const auto rows = locality_report(records);
  ASSERT_EQ(rows.size(), records.size());
  for (const auto& row : rows) EXPECT_GE(row.bound_margin, -1e-9);
  // With sigma on the complement the two monotones coincide here.
  for (const auto& row : rows) EXPECT_LT(std::abs(row.difference), 1e-9);
}

TEST(Lightcone, JsonRoundTrip) {
  ChainSpec c = chain(4, 0.25, 0.3);
  c.fields = {1.0, 1.0, 0.5, 0.5};
  const ChainSpec back = chain_spec_from_json(nlohmann::json::parse(to_json(c).dump()));
  EXPECT_EQ(back.fields, c.fields);
  EXPECT_EQ(back.lambda, c.lambda);
  EXPECT_EQ(back.gate_time, c.gate_time);
  nlohmann::json bad = to_json(c);
  bad["sites"] = 4;
  EXPECT_THROW(chain_spec_from_json(bad), PreconditionError);
  ChainSpec too_big = chain(kMaxChainSites + 1, 0, 0);
  EXPECT_THROW(too_big.validate(), PreconditionError);
}

}  // namespace
}  // namespace relent
