#pragma once

// Kondo-impurity XXZ chain with open boundaries.
//
//   H = (J/4)  sum_{i=2}^{N-1} (X_i X_{i+1} + Y_i Y_{i+1} + Delta Z_i Z_{i+1})
//     + (Jk/4) (X_1 X_c + Y_1 Y_c + Delta Z_1 Z_c)
//     + (B/2)  sum_{i=1}^{N} Z_i
//
// with spin operators S = sigma/2. The impurity is site 1 and bonds to the
// host only through the Kondo bond to site c = coupled_site.
//
// Chains with N < 4 are treated as impurity-free host fixtures: bulk bonds
// run over (1,2)...(N-1,N) and Jk must be zero.

#include <vector>

#include "kqet/hilbert.hpp"

namespace kqet {

struct ModelParams {
  int num_sites = 8;
  double j = 0.5;
  double delta = 1.0;
  double jk = 0.2;
  double b = 0.4;
  int coupled_site = 2;
  int n_a = 4;
  int n_b = 7;
  Axis sigma_a = Axis::X;
  Axis sigma_b = Axis::Y;
  /// Adds a J bulk bond (1,2) on top of the Kondo bond.
  bool include_impurity_bulk_bond = false;

  static constexpr int kImpuritySite = 1;
  static constexpr int kMinProtocolSites = 4;

  bool host_fixture() const noexcept { return num_sites < kMinProtocolSites; }

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Checks what build_hamiltonian needs. Throws StructuralError.
void validate_hamiltonian(const ModelParams& p);
/// Adds the Alice/Bob geometry constraints. Throws StructuralError.
void validate_protocol(const ModelParams& p);

/// A local Hamiltonian block whose ground-state expectation vanishes.
struct LocalBlock {
  int site;
  OperatorSum op;
};

OperatorSum build_hamiltonian(const ModelParams& p);

/// h with its offset lowered by e0.
OperatorSum shift_ground(const OperatorSum& h, double e0);

/// Every term of h touching `site`, plus the constant that zeroes <g|.|g>.
/// Throws DegenerateModelError when no term touches the site.
LocalBlock incident_block(const OperatorSum& h, int site, const StateVector& g);

/// Bob's extraction block: field and all bonds incident to n_B.
LocalBlock bob_local_hamiltonian(const ModelParams& p, const StateVector& g);

/// Blocks h_1..h_N with each bond owned by its lower site, each field by its
/// own site, and per-block constants so that <g|h_n|g> = 0. Their sum is
/// H - E0 term for term.
std::vector<LocalBlock> zero_point_partition(const ModelParams& p,
                                             const StateVector& g);

/// Spectral norm of i[h,s] - i[block,s] on the support of the difference.
double check_commutator_condition(const OperatorSum& h, const OperatorSum& block,
                                  const PauliString& s);

}  // namespace kqet
