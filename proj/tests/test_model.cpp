#include <gtest/gtest.h>

#include <random>

#include "kqet/eigensolver.hpp"
#include "kqet/entanglement.hpp"
#include "kqet/error.hpp"
#include "kqet/model.hpp"
#include "oracle.hpp"

using namespace kqet;

namespace {

ModelParams pair_fixture() {
  ModelParams p;
  p.num_sites = 2;
  p.j = 1.0;
  p.delta = 1.0;
  p.jk = 0.0;
  p.b = 0.0;
  return p;
}

GroundResult solve(const ModelParams& p) {
  return ground_state(build_hamiltonian(p), p.num_sites);
}

}  // namespace

TEST(BuildHamiltonian, PairFixtureHasQuarterCouplings) {
  const OperatorSum h = build_hamiltonian(pair_fixture());
  OperatorSum expect;
  for (Axis a : {Axis::X, Axis::Y, Axis::Z}) expect.add(PauliString(0.25, {{1, a}, {2, a}}));
  EXPECT_EQ(h, expect);

  // Against S.S = (XX + YY + ZZ)/4 built from Kronecker products.
  const oracle::Mat m = oracle::operator_matrix(h, 2);
  const std::vector<double> ev = oracle::hermitian_eigenvalues(m);
  EXPECT_NEAR(ev[0], -0.75, 1e-12);
  for (int i = 1; i < 4; ++i) EXPECT_NEAR(ev[i], 0.25, 1e-12);
}

TEST(BuildHamiltonian, ZeroKondoLeavesOnlyImpurityField) {
  ModelParams p;
  p.jk = 0.0;
  const OperatorSum h = build_hamiltonian(p);
  for (const auto& t : h.terms()) {
    if (t.touches(1)) EXPECT_EQ(t, PauliString::single(Axis::Z, 1, p.b / 2));
  }
}

TEST(BuildHamiltonian, FieldOnlyThreeSites) {
  ModelParams p;
  p.num_sites = 3;
  p.b = 0.4;
  p.j = 0.0;
  p.jk = 0.0;
  const OperatorSum h = build_hamiltonian(p);
  ASSERT_EQ(h.terms().size(), 3u);
  for (const auto& t : h.terms()) {
    EXPECT_EQ(t.factors().size(), 1u);
    EXPECT_EQ(t.factors()[0].axis, Axis::Z);
    EXPECT_DOUBLE_EQ(t.coeff(), 0.2);
  }
}

TEST(BuildHamiltonian, ImpurityBondsOnlyThroughCoupledSite) {
  ModelParams p;
  p.coupled_site = 5;
  const OperatorSum h = build_hamiltonian(p);
  for (const auto& t : h.terms()) {
    if (t.touches(1) && t.factors().size() == 2) EXPECT_TRUE(t.touches(5)) << t.to_string();
  }
  p.include_impurity_bulk_bond = true;
  bool bulk = false;
  const OperatorSum with_bond = build_hamiltonian(p);
  for (const auto& t : with_bond.terms()) {
    bulk = bulk || (t.touches(1) && t.touches(2));
  }
  EXPECT_TRUE(bulk);
}

TEST(Validate, RejectsBadParameters) {
  ModelParams p;
  p.num_sites = 13;
  EXPECT_THROW(validate_hamiltonian(p), StructuralError);
  p = {};
  p.coupled_site = 1;
  EXPECT_THROW(validate_hamiltonian(p), StructuralError);
  p = {};
  p.j = std::numeric_limits<double>::infinity();
  EXPECT_THROW(validate_hamiltonian(p), StructuralError);
  p = {};
  p.n_b = 5;
  EXPECT_THROW(validate_protocol(p), StructuralError);  // |n_A - n_B| < 2
  p = {};
  p.n_a = 1;
  EXPECT_THROW(validate_protocol(p), StructuralError);
  p = pair_fixture();
  EXPECT_NO_THROW(validate_hamiltonian(p));
  EXPECT_THROW(validate_protocol(p), StructuralError);
  p.jk = 0.1;
  EXPECT_THROW(validate_hamiltonian(p), StructuralError);
}

TEST(ShiftGround, Examples) {
  const OperatorSum h = build_hamiltonian(pair_fixture());
  EXPECT_DOUBLE_EQ(shift_ground(h, -0.75).offset(), 0.75);
  EXPECT_EQ(shift_ground(shift_ground(h, 0.0), 0.0), h);

  const double r = 1.0 / std::sqrt(2.0);
  const StateVector singlet(RawState(2, {0, r, -r, 0}));
  EXPECT_NEAR(expectation(shift_ground(h, -0.75), singlet), 0.0, 1e-15);
}

TEST(BobBlock, ZeroExpectationAndCommutator) {
  const ModelParams p;
  const GroundResult g = solve(p);
  const LocalBlock bob = bob_local_hamiltonian(p, g.state);
  EXPECT_EQ(bob.site, p.n_b);
  EXPECT_NEAR(expectation(bob.op, g.state), 0.0, 1e-12);
  const OperatorSum h = build_hamiltonian(p);
  EXPECT_NEAR(check_commutator_condition(h, bob.op, PauliString::single(p.sigma_b, p.n_b)), 0.0,
              1e-12);
}

TEST(BobBlock, UntouchedSiteIsDegenerate) {
  ModelParams p;
  p.j = 0.0;
  p.b = 0.0;
  const GroundResult g = solve(p);
  EXPECT_THROW(bob_local_hamiltonian(p, g.state), DegenerateModelError);
}

TEST(CommutatorCondition, DetectsMissingBondAndForeignSupport) {
  ModelParams p;
  p.num_sites = 4;
  p.n_a = 2;
  p.n_b = 4;
  const OperatorSum h = build_hamiltonian(p);
  const GroundResult g = solve(p);
  const PauliString s = PauliString::single(Axis::Y, 3);
  const LocalBlock full = incident_block(h, 3, g.state);
  EXPECT_NEAR(check_commutator_condition(h, full.op, s), 0.0, 1e-12);

  OperatorSum partial;
  for (const auto& t : full.op.terms()) {
    if (!t.touches(4)) partial.add(t);
  }
  EXPECT_GT(check_commutator_condition(h, partial, s), 1e-3);

  const OperatorSum far({PauliString::single(Axis::Z, 1)});
  EXPECT_NEAR(check_commutator_condition(h, far, s), operator_norm(i_commutator(h, s)), 1e-12);
}

TEST(ZeroPointPartition, ReassemblesShiftedHamiltonian) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const ModelParams p = oracle::random_params(rng);
    const OperatorSum h = build_hamiltonian(p);
    const GroundResult g = ground_state(h, p.num_sites);
    const auto blocks = zero_point_partition(p, g.state);
    OperatorSum sum;
    double offsets = 0.0;
    for (const auto& b : blocks) {
      EXPECT_NEAR(expectation(b.op, g.state), 0.0, 1e-10) << "site " << b.site;
      sum += b.op;
      offsets += b.op.offset();
    }
    EXPECT_NEAR(offsets, -g.e0, 1e-10);
    const OperatorSum diff = (sum - shift_ground(h, g.e0)).pruned(1e-12);
    EXPECT_TRUE(diff.empty()) << diff.to_string();
    EXPECT_NEAR(diff.offset(), 0.0, 1e-10);
  }
}
