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
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include "relent/channels.hpp"
#include "relent/ensembles.hpp"
#include "relent/error.hpp"
#include "relent/rng.hpp"
#include "relent/secondlaw.hpp"
#include "test_util.hpp"

namespace relent {
namespace {

constexpr double kLn3MinusLn2 = 0.4054651081081645;

HermitianOperator diag(std::vector<double> d) { return HermitianOperator::diagonal(d); }

TEST(Contours, Values) {
  EXPECT_NEAR(relative_entropy_to_uniform(1.0 / 3, 1.0 / 3, 1.0 / 3), 0.0, 1e-15);
  EXPECT_NEAR(relative_entropy_to_uniform(1, 0, 0), std::log(3.0), 1e-15);
  EXPECT_NEAR(relative_entropy_to_uniform(0.5, 0.5, 0), kLn3MinusLn2, 1e-15);
}

TEST(Contours, GridShape) {
  EXPECT_EQ(contour_grid(3).size(), 10u);
  EXPECT_EQ(contour_grid(201).size(), 20503u);
  for (const auto& p : contour_grid(7)) {
    EXPECT_GE(p.p3, 0.0);
    EXPECT_NEAR(p.p1 + p.p2 + p.p3, 1.0, 1e-15);
  }
  EXPECT_THROW(contour_grid(1), PreconditionError);
}

TEST(Contours, RadialMonotone) {
  const double c = 1.0 / 3.0;
  const double vertices[3][3] = {{1, 0, 0}, {0, 1, 0}, {0.2, 0.3, 0.5}};
  for (const auto& v : vertices) {
    double previous = -1.0;
    for (int k = 0; k <= 100; ++k) {
      const double s = k / 100.0;
      const double value =
          relative_entropy_to_uniform(c + s * (v[0] - c), c + s * (v[1] - c), c + s * (v[2] - c));
      EXPECT_GE(value, previous - 1e-15);
      previous = value;
    }
  }
}

TEST(Ledger, ReplacementOnExcitedQubit) {
  const EnsembleSpec spec = EnsembleSpec::canonical(diag({0, 1}), 1.0);
  const ReferenceState ref = reference_state(spec);
  const SecondLawLedger l = evaluate(DensityMatrix::basis_state(2, 1), partial_replacement(ref.state, 0.5), spec);
  // Independent oracle from populations: rho' = diag(p/2, 1 - p/2) with p the Gibbs ground weight.
  const double p = ref.state.matrix()(0, 0).real();
  const double a = 0.5 * p;
  const double b = 1.0 - a;
  const double s_after = -(a * std::log(a) + b * std::log(b));
  const double clausius = -s_after + (b - 1.0);
  EXPECT_NEAR(l.clausius_terms, clausius, 1e-12);
  EXPECT_LT(l.delta_rel, 0.0);
  EXPECT_LT(l.identity_residual, 1e-9);
  EXPECT_TRUE(l.pass);
}

TEST(Ledger, UnitaryCommutingWithHIsReversible) {
  Rng rng(41);
  const HermitianOperator h = random_hermitian(4, rng);
  const EnsembleSpec spec = EnsembleSpec::canonical(h, 0.9);
  const SecondLawLedger l = evaluate(random_density_matrix(4, rng), hamiltonian_evolution(h, 2.3), spec);
  EXPECT_NEAR(l.delta_rel, 0.0, 1e-9);
  EXPECT_LT(l.identity_residual, 1e-9);
}

TEST(Ledger, MicrocanonicalEntropyDoesNotDecrease) {
  Rng rng(42);
  const EnsembleSpec spec = EnsembleSpec::microcanonical(diag({0, 1, 1, 1, 2}), {1.0, 0.1});
  const ReferenceState ref = reference_state(spec);
  // Mixture of unitaries acting inside the shell.
  std::vector<QuantumChannel> unitaries;
  for (int k = 0; k < 3; ++k) {
    Matrix u = Matrix::Identity(5, 5);
    u.block(1, 1, 3, 3) = random_unitary(3, rng);
    unitaries.push_back(unitary_channel(u));
  }
  const std::vector<double> w{0.5, 0.3, 0.2};
  const QuantumChannel n = mix(w, unitaries);
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix p = *ref.shell_projector;
    Matrix inside = p * random_density_matrix(5, rng).matrix() * p;
    const DensityMatrix rho(inside / inside.trace().real());
    const SecondLawLedger l = evaluate(rho, n, spec, ref);
    EXPECT_GE(l.entropy_after - l.entropy_before, -1e-9);
    EXPECT_LT(l.identity_residual, 1e-9);
    EXPECT_TRUE(l.pass);
  }
}

TEST(Ledger, GrandCanonicalIdentity) {
  Rng rng(43);
  const EnsembleSpec spec = EnsembleSpec::grand_canonical(diag({0, 0.7, 1.1, 1.8}), diag({0, 1, 1, 2}), 1.2, 0.3);
  const ReferenceState ref = reference_state(spec);
  for (int trial = 0; trial < 5; ++trial) {
    const SecondLawLedger l = evaluate(random_density_matrix(4, rng), partial_replacement(ref.state, 0.3), spec, ref);
    EXPECT_LT(l.identity_residual, 1e-9);
    EXPECT_LE(l.delta_rel, 1e-9);
    ASSERT_TRUE(l.number_before.has_value());
  }
}

TEST(Ledger, GeneralExponentialIdentity) {
  Rng rng(44);
  const std::vector<WeightedObservable> terms{{0.7, diag({0, 1, 2})}, {-0.2, diag({1, 0, 1})}};
  const EnsembleSpec spec = EnsembleSpec::general_exponential(terms);
  const ReferenceState ref = reference_state(spec);
  const SecondLawLedger l = evaluate(random_density_matrix(3, rng), partial_replacement(ref.state, 0.6), spec, ref);
  EXPECT_LT(l.identity_residual, 1e-9);
  EXPECT_LE(l.delta_rel, 1e-9);
}

TEST(Ledger, RejectsChannelThatMovesSigma) {
  const EnsembleSpec spec = EnsembleSpec::canonical(diag({0, 1.5}), 1.0);
  EXPECT_THROW(evaluate(DensityMatrix::maximally_mixed(2), depolarizing(2, 0.5), spec), PreconditionError);
}

TEST(Ledger, RejectsStateOutsideShell) {
  const EnsembleSpec spec = EnsembleSpec::microcanonical(diag({0, 1, 1, 2}), {1.0, 0.1});
  EXPECT_THROW(evaluate(DensityMatrix::basis_state(4, 0), identity_channel(4), spec), PreconditionError);
}

TEST(Ledger, InfiniteRelativeEntropiesAreValues) {
  const EnsembleSpec spec = EnsembleSpec::microcanonical(diag({0, 1}), {0.0, 0.1});
  const ReferenceState ref = reference_state(spec);
  const SecondLawLedger infinite_before =
      ledger_from_states(DensityMatrix::basis_state(2, 1), DensityMatrix::basis_state(2, 0), spec, ref);
  EXPECT_TRUE(infinite_before.support_violation);
  EXPECT_TRUE(infinite_before.pass);
  EXPECT_TRUE(std::isnan(infinite_before.identity_residual));
  const SecondLawLedger infinite_after =
      ledger_from_states(DensityMatrix::basis_state(2, 0), DensityMatrix::basis_state(2, 1), spec, ref);
  EXPECT_FALSE(infinite_after.pass);
  const nlohmann::json j = to_json(infinite_after);
  EXPECT_EQ(j["rel_after"], "inf");
  EXPECT_EQ(j["verdict"], "fail");
}

TEST(Ledger, ZeroToleranceFailsFromRoundOff) {
  Rng rng(45);
  const EnsembleSpec spec = EnsembleSpec::canonical(diag({0, 0.4, 1.3}), 1.0);
  const ReferenceState ref = reference_state(spec);
  int failures = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const SecondLawLedger l = evaluate(random_density_matrix(3, rng), dephasing(spec.hamiltonian), spec, ref, 0.0);
    failures += l.pass ? 0 : 1;
  }
  EXPECT_GT(failures, 0);
}

TEST(Ledger, DeltaRelVanishesLinearlyWithCoupling) {
  const EnsembleSpec spec = EnsembleSpec::canonical(diag({0, 1}), 1.0);
  const ReferenceState ref = reference_state(spec);
  // Full-rank start: linear in lambda. From a pure state the first-order
  // term picks up a lambda ln(lambda) piece instead.
  const std::vector<double> p{0.2, 0.8};
  const DensityMatrix rho = DensityMatrix::diagonal(p);
  const double small = evaluate(rho, thermal_qubit(1.0, 1.0, 1e-3), spec, ref).delta_rel;
  const double smaller = evaluate(rho, thermal_qubit(1.0, 1.0, 1e-4), spec, ref).delta_rel;
  EXPECT_LT(small, 0.0);
  EXPECT_GE(small / smaller, 9.9);
  EXPECT_LE(small / smaller, 10.1);
}

TEST(Monotonicity, UnitaryGapIsZero) {
  Rng rng(46);
  const DensityMatrix rho = random_density_matrix(3, rng);
  const DensityMatrix sigma = random_density_matrix(3, rng);
  EXPECT_NEAR(*monotonicity_gap(rho, sigma, unitary_channel(random_unitary(3, rng))), 0.0, 1e-9);
}

TEST(Monotonicity, PartialTrace) {
  Rng rng(47);
  const std::vector<Index> dims{2, 3};
  for (int trial = 0; trial < 10; ++trial) {
    const DensityMatrix rho = random_density_matrix(6, rng).with_factors(dims);
    const DensityMatrix sigma = random_density_matrix(6, rng).with_factors(dims);
    EXPECT_GE(*monotonicity_gap(rho, sigma, discard_channel(dims, 0)), -1e-9);
  }
}

TEST(Monotonicity, IncomparableWhenInfinite) {
  EXPECT_FALSE(monotonicity_gap(DensityMatrix::basis_state(2, 0), DensityMatrix::basis_state(2, 1), identity_channel(2))
                   .has_value());
}

}  // namespace
}  // namespace relent
