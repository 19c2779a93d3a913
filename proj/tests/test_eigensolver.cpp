#include <gtest/gtest.h>

#include <random>

#include "kqet/eigensolver.hpp"
#include "kqet/entanglement.hpp"
#include "kqet/error.hpp"
#include "kqet/model.hpp"
#include "oracle.hpp"

using namespace kqet;

namespace {

OperatorSum heisenberg_pair() {
  OperatorSum h;
  for (Axis a : {Axis::X, Axis::Y, Axis::Z}) h.add(PauliString(0.25, {{1, a}, {2, a}}));
  return h;
}

}  // namespace

TEST(GroundState, HeisenbergPair) {
  const GroundResult g = ground_state(heisenberg_pair(), 2);
  EXPECT_NEAR(g.e0, -0.75, 1e-12);
  EXPECT_NEAR(g.gap, 1.0, 1e-12);
  EXPECT_FALSE(g.degenerate);
}

TEST(GroundState, FieldDominatedChainIsAllDown) {
  ModelParams p;
  p.j = 0.0;
  p.jk = 0.0;
  p.b = 0.7;
  const GroundResult g = ground_state(build_hamiltonian(p), p.num_sites);
  EXPECT_NEAR(magnetization(g.state), -1.0, 1e-12);
  EXPECT_NEAR(std::abs(g.state[g.state.dim() - 1]), 1.0, 1e-12);
}

TEST(LowestEigenpairs, FullSpectrumMatchesJacobiOracle) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 6; ++trial) {
    const ModelParams p = oracle::random_params(rng, {4, 6});
    const OperatorSum h = build_hamiltonian(p);
    const int dim = 1 << p.num_sites;
    const auto pairs = lowest_eigenpairs(h, p.num_sites, dim, {EigenMethod::kDense});
    const auto ref = oracle::hermitian_eigenvalues(oracle::operator_matrix(h, p.num_sites));
    ASSERT_EQ(pairs.size(), ref.size());
    for (int i = 0; i < dim; ++i) EXPECT_NEAR(pairs[i].energy, ref[i], 1e-10);
  }
}

TEST(LowestEigenpairs, EigenvectorsSatisfyEigenEquation) {
  ModelParams p;
  p.num_sites = 6;
  p.n_a = 3;
  p.n_b = 6;
  const OperatorSum h = build_hamiltonian(p);
  for (EigenMethod m : {EigenMethod::kDense, EigenMethod::kLanczos}) {
    for (const auto& e : lowest_eigenpairs(h, p.num_sites, 3, {m})) {
      const RawState r = apply_operator(h, e.state) - std::complex<double>(e.energy) * e.state.raw();
      EXPECT_LT(r.norm(), 1e-8);
    }
  }
}

TEST(LowestEigenpairs, LanczosMatchesDense) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 8; ++trial) {
    const ModelParams p = oracle::random_params(rng);
    const OperatorSum h = build_hamiltonian(p);
    const auto dense = lowest_eigenpairs(h, p.num_sites, 3, {EigenMethod::kDense});
    const auto lanczos = lowest_eigenpairs(h, p.num_sites, 3, {EigenMethod::kLanczos});
    ASSERT_EQ(lanczos.size(), 3u);
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(lanczos[i].energy, dense[i].energy, 1e-9);
    if (dense[1].energy - dense[0].energy > 1e-6) {
      EXPECT_NEAR(std::abs(inner(dense[0].state, lanczos[0].state)), 1.0, 1e-8);
    }
  }
}

TEST(LowestEigenpairs, LanczosIterationCapReported) {
  ModelParams p;
  const OperatorSum h = build_hamiltonian(p);
  try {
    lowest_eigenpairs(h, p.num_sites, 2, {EigenMethod::kLanczos, 3, 1e-14});
    FAIL() << "expected SolverError";
  } catch (const SolverError& e) {
    EXPECT_GT(e.iterations(), 0);
  }
}

TEST(FixPhase, FirstNonzeroAmplitudeRealPositive) {
  const StateVector v = fix_phase(RawState(2, {0, {0, -0.6}, {0.8, 0}, 0}));
  EXPECT_NEAR(v[1].real(), 0.6, 1e-15);
  EXPECT_NEAR(v[1].imag(), 0.0, 1e-15);
  EXPECT_NEAR(v[2].imag(), 0.8, 1e-15);
}

TEST(LowestEigenpairs, DeterministicAcrossCalls) {
  const ModelParams p;
  const OperatorSum h = build_hamiltonian(p);
  for (EigenMethod m : {EigenMethod::kDense, EigenMethod::kLanczos}) {
    const auto a = lowest_eigenpairs(h, p.num_sites, 2, {m});
    const auto b = lowest_eigenpairs(h, p.num_sites, 2, {m});
    for (std::size_t i = 0; i < a[0].state.dim(); ++i) EXPECT_EQ(a[0].state[i], b[0].state[i]);
  }
}
