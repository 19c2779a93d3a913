#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "kqet/error.hpp"
#include "kqet/hilbert.hpp"
#include "oracle.hpp"

using namespace kqet;
using cplx = std::complex<double>;

namespace {

StateVector plus_state() {
  const double r = 1.0 / std::sqrt(2.0);
  return StateVector(RawState(1, {r, r}));
}

StateVector bell() {
  const double r = 1.0 / std::sqrt(2.0);
  return StateVector(RawState(2, {r, 0, 0, r}));
}

void expect_state_near(const RawState& a, const RawState& b, double tol = 1e-12) {
  ASSERT_EQ(a.dim(), b.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) {
    EXPECT_NEAR(std::abs(a[i] - b[i]), 0.0, tol) << "index " << i;
  }
}

StateVector random_state(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  RawState r = RawState::zeros(n);
  for (std::size_t i = 0; i < r.dim(); ++i) r[i] = {g(rng), g(rng)};
  return StateVector::normalized(r);
}

}  // namespace

TEST(PauliString, SingleQubitActions) {
  const StateVector zero = StateVector::basis(1, 0);
  expect_state_near(apply_pauli_string(PauliString::single(Axis::Z, 1), zero), RawState(1, {1, 0}));
  expect_state_near(apply_pauli_string(PauliString::single(Axis::X, 1), zero), RawState(1, {0, 1}));
  expect_state_near(apply_pauli_string(PauliString::single(Axis::Y, 1), zero),
                    RawState(1, {0, cplx(0, 1)}));
}

TEST(PauliString, RejectsBadConstruction) {
  EXPECT_THROW(PauliString(1.0, {{0, Axis::X}}), StructuralError);
  EXPECT_THROW(PauliString(1.0, {{1, Axis::X}, {1, Axis::Z}}), StructuralError);
  EXPECT_THROW(PauliString(std::nan(""), {{1, Axis::X}}), StructuralError);
  EXPECT_THROW(apply_pauli_string(PauliString::single(Axis::X, 3), StateVector::basis(2, 0)),
               StructuralError);
}

TEST(OperatorSum, ApplyExamples) {
  OperatorSum z_plus_one({PauliString::single(Axis::Z, 1)}, 1.0);
  expect_state_near(apply_operator(z_plus_one, StateVector::basis(1, 0)), RawState(1, {2, 0}));

  const RawState zero_result = apply_operator(OperatorSum{}, StateVector::basis(1, 0));
  expect_state_near(zero_result, RawState(1, {0, 0}));

  OperatorSum z02({PauliString::single(Axis::Z, 1, 0.2)});
  expect_state_near(apply_operator(z02, StateVector::basis(1, 1)), RawState(1, {0, -0.2}));
}

TEST(OperatorSum, AddMergesAndFoldsIdentity) {
  OperatorSum h;
  h.add(PauliString::single(Axis::X, 1, 0.5));
  h.add(PauliString::single(Axis::X, 1, 0.25));
  h.add(PauliString::identity(2.0));
  ASSERT_EQ(h.terms().size(), 1u);
  EXPECT_DOUBLE_EQ(h.terms()[0].coeff(), 0.75);
  EXPECT_DOUBLE_EQ(h.offset(), 2.0);
  h.add(PauliString::single(Axis::X, 1, -0.75));
  EXPECT_TRUE(h.empty());
}

TEST(Expectation, Examples) {
  EXPECT_DOUBLE_EQ(expectation(OperatorSum({PauliString::single(Axis::Z, 1)}),
                               StateVector::basis(1, 0)),
                   1.0);
  EXPECT_NEAR(expectation(OperatorSum({PauliString::single(Axis::X, 1)}), plus_state()), 1.0,
              1e-15);
  EXPECT_NEAR(expectation(OperatorSum({PauliString(1.0, {{1, Axis::X}, {2, Axis::X}})}), bell()),
              1.0, 1e-15);
}

TEST(MatrixElement, YOffDiagonal) {
  const cplx me = matrix_element(StateVector::basis(1, 0),
                                 OperatorSum({PauliString::single(Axis::Y, 1)}),
                                 StateVector::basis(1, 1));
  EXPECT_NEAR(std::abs(me - cplx(0, -1)), 0.0, 1e-15);
}

TEST(MultiplyStrings, Examples) {
  const auto [p1, r1] = multiply_strings(PauliString::single(Axis::X, 1), PauliString::single(Axis::Y, 1));
  EXPECT_EQ(p1, cplx(0, 1));
  EXPECT_EQ(r1, PauliString::single(Axis::Z, 1));

  const auto [p2, r2] = multiply_strings(PauliString::single(Axis::X, 1), PauliString::single(Axis::X, 1));
  EXPECT_EQ(p2, cplx(1, 0));
  EXPECT_TRUE(r2.is_identity());

  const auto [p3, r3] = multiply_strings(PauliString::single(Axis::X, 1), PauliString::single(Axis::Y, 2));
  EXPECT_EQ(p3, cplx(1, 0));
  EXPECT_EQ(r3, PauliString(1.0, {{1, Axis::X}, {2, Axis::Y}}));
}

TEST(MultiplyStrings, MatchesMatrixProduct) {
  const Axis axes[] = {Axis::X, Axis::Y, Axis::Z};
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    auto draw = [&] {
      std::vector<SiteAxis> f;
      for (int s = 1; s <= 3; ++s) {
        if (rng() % 3) f.push_back({s, axes[rng() % 3]});
      }
      return PauliString(0.5 + (rng() % 4), f);
    };
    const PauliString p = draw(), q = draw();
    const auto [phase, r] = multiply_strings(p, q);
    const oracle::Mat lhs = oracle::string_matrix(p, 3) * oracle::string_matrix(q, 3);
    const oracle::Mat rhs = phase * oracle::string_matrix(r, 3);
    EXPECT_NEAR((lhs - rhs).norm(), 0.0, 1e-12);
  }
}

TEST(ICommutator, Examples) {
  const OperatorSum zx = i_commutator(OperatorSum({PauliString::single(Axis::Z, 1)}),
                                      PauliString::single(Axis::X, 1));
  EXPECT_EQ(zx, OperatorSum({PauliString::single(Axis::Y, 1, -2.0)}));
  EXPECT_TRUE(i_commutator(OperatorSum({PauliString::single(Axis::X, 1)}),
                           PauliString::single(Axis::X, 1))
                  .empty());
  EXPECT_TRUE(i_commutator(OperatorSum({PauliString::single(Axis::Z, 1)}),
                           PauliString::single(Axis::X, 2))
                  .empty());
}

TEST(ICommutator, MatchesDenseOracle) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Axis axes[] = {Axis::X, Axis::Y, Axis::Z};
  for (int trial = 0; trial < 50; ++trial) {
    OperatorSum h(u(rng));
    for (int t = 0; t < 5; ++t) {
      std::vector<SiteAxis> f;
      for (int s = 1; s <= 3; ++s) {
        if (rng() % 2) f.push_back({s, axes[rng() % 3]});
      }
      h.add(PauliString(u(rng), f));
    }
    const PauliString s(1.0, {{1 + static_cast<int>(rng() % 3), axes[rng() % 3]}});
    const oracle::Mat hm = oracle::operator_matrix(h, 3);
    const oracle::Mat sm = oracle::string_matrix(s, 3);
    const oracle::Mat expect = cplx(0, 1) * (hm * sm - sm * hm);
    EXPECT_NEAR((oracle::operator_matrix(i_commutator(h, s), 3) - expect).norm(), 0.0, 1e-12);
  }
}

TEST(ApplyOperator, LinearAndMatchesDense) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Axis axes[] = {Axis::X, Axis::Y, Axis::Z};
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 5);
    OperatorSum h(u(rng));
    for (int t = 0; t < 6; ++t) {
      std::vector<SiteAxis> f;
      for (int s = 1; s <= n; ++s) {
        if (rng() % 2) f.push_back({s, axes[rng() % 3]});
      }
      h.add(PauliString(u(rng), f));
    }
    const StateVector a = random_state(n, rng), b = random_state(n, rng);
    const cplx alpha(0.3, -0.8);
    const RawState combo = a.raw() + alpha * b.raw();
    expect_state_near(apply_operator(h, combo),
                      apply_operator(h, a) + alpha * apply_operator(h, b), 1e-12);
    const Eigen::VectorXcd dense = oracle::operator_matrix(h, n) * oracle::vec(a);
    expect_state_near(apply_operator(h, a), oracle::raw(dense, n), 1e-12);
    EXPECT_NEAR((to_dense(h, n) - oracle::operator_matrix(h, n)).norm(), 0.0, 1e-12);
  }
}

TEST(StateVector, RejectsUnnormalized) {
  EXPECT_THROW(StateVector(RawState(1, {1.0, 1.0})), StructuralError);
  EXPECT_THROW(StateVector::normalized(RawState::zeros(2)), StructuralError);
}
