#pragma once

// Entanglement diagnostics of pure states. Natural logarithms throughout.

#include <vector>

#include <Eigen/Dense>

#include "kqet/hilbert.hpp"
#include "kqet/model.hpp"

namespace kqet {

/// Reduced density matrix on an ordered site subset (first site = MSB of the
/// subsystem index).
struct ReducedDensity {
  Eigen::MatrixXcd matrix;
  std::vector<int> subsystem;
};

/// Schmidt coefficients across the bond after site `cut`, nonincreasing.
struct SchmidtSpectrum {
  std::vector<double> coefficients;
  int cut;
};

ReducedDensity reduced_density(const StateVector& psi, std::vector<int> subset);

/// Eigenvalues at or below 1e-14 contribute nothing.
double von_neumann_entropy(const ReducedDensity& rho);
double entropy_from_probabilities(std::span<const double> probabilities);

SchmidtSpectrum schmidt_coefficients(const StateVector& psi, int cut);
/// Entanglement entropy from squared Schmidt coefficients.
double schmidt_entropy(const SchmidtSpectrum& s);

/// Entropy across the bond after site floor(N/2).
double half_chain_entropy(const StateVector& psi);
/// Entropy of the bipartition {sites 1..cut} | rest.
double cut_entropy(const StateVector& psi, int cut);

/// Average entanglement lost across `cut` when measuring `s_a` on psi.
double delta_s_ab(const StateVector& psi, const PauliString& s_a, int cut);

/// Bond midway between Alice and Bob: floor((n_A + n_B) / 2).
int midpoint_cut(int n_a, int n_b) noexcept;
/// delta_s_ab with Alice's measurement from p and the midpoint cut.
double delta_s_ab(const StateVector& g, const ModelParams& p);

/// (1/N) sum_i <Z_i>.
double magnetization(const StateVector& psi);

/// Spectral norm of a Hermitian operator sum, offset included, evaluated on
/// the operator's own support. Throws CapabilityError beyond 12 sites.
double operator_norm(const OperatorSum& h);

/// S - E_B^2 / (4 ||H_B||^2). Throws DomainError for a zero norm.
double bound_eq10_margin(double s_a_comp, double e_b, double h_b_norm);

/// Two-qubit model H = h(Z_1 + Z_2) + 2k X_1 X_2 + const with Alice measuring
/// X on qubit 1 and Bob rotating with Y on qubit 2.
struct MinimalModelCase {
  double h;
  double k;
  double lambda;
  double delta_s;
  double e_b;
  double rhs_eq9;

  double margin() const noexcept { return delta_s - rhs_eq9; }
};

MinimalModelCase minimal_model_case(double h, double k);

/// Lower bound on the entanglement change for a given teleported energy.
double minimal_model_bound(double h, double k, double e_b);

}  // namespace kqet
