#pragma once

// Energy teleportation by local measurement, classical communication and a
// conditional local rotation.
//
// Alice projects with P(mu) = (1 + mu s_A)/2, Bob applies
// U(mu) = cos(theta) I - i mu sin(theta) s_B, and Bob's block then carries
//   Tr[rho H_B] = (xi - sqrt(xi^2 + eta^2)) / 2
// with xi = <g|s_B H s_B|g> against the ground-shifted H and
// eta = <g|s_A i[s_B, H]|g>, which is the sign for which
// cos 2theta = xi/r, sin 2theta = -eta/r minimizes Bob's energy.

#include <utility>

#include "kqet/eigensolver.hpp"
#include "kqet/hilbert.hpp"
#include "kqet/model.hpp"

namespace kqet {

struct QetResult {
  double xi;
  double eta;
  double theta;
  double p_plus;
  double e_injected;
  double e_b_closed;
  double e_b_direct;
  double e_teleported;
  bool degenerate;
};

/// Minimum outcome probability that still admits a normalized projection.
inline constexpr double kMinOutcomeProbability = 1e-12;

/// (p_+, p_-)
std::pair<double, double> measurement_probabilities(const StateVector& g,
                                                    const PauliString& s_a);

/// Unnormalized branch P(mu)|psi>.
RawState project_outcome(const RawState& psi, const PauliString& s_a, int mu);

/// P(mu)|g> / sqrt(p_mu). Throws ImpossibleOutcomeError below 1e-12.
StateVector post_measurement_state(const StateVector& g, const PauliString& s_a, int mu);

/// sum_mu <g|P(mu) H P(mu)|g> for the ground-shifted H.
double injected_energy(const StateVector& g, const OperatorSum& h_shifted,
                       const PauliString& s_a);

double xi(const StateVector& g, const OperatorSum& h_shifted, const PauliString& s_b);

/// <g|s_A i[s_B, h]|g>; independent of h's offset.
double eta(const StateVector& g, const OperatorSum& h, const PauliString& s_a,
           const PauliString& s_b);

/// theta in (-pi/2, pi/2]. Throws DomainError when xi = eta = 0.
double optimal_theta(double xi, double eta);

/// U(mu) = cos(theta) I - i mu sin(theta) s_B.
class ConditionalUnitary {
 public:
  ConditionalUnitary(int mu, double theta, PauliString s_b);

  RawState apply(const RawState& psi) const;
  RawState apply_adjoint(const RawState& psi) const;

  double identity_weight() const noexcept { return identity_weight_; }
  /// Real factor w in the "-i w s_B" part, i.e. mu sin(theta).
  double pauli_weight() const noexcept { return pauli_weight_; }
  const PauliString& pauli() const noexcept { return s_b_; }

 private:
  double identity_weight_;
  double pauli_weight_;
  PauliString s_b_;
};

ConditionalUnitary conditional_unitary(int mu, double theta, const PauliString& s_b);

/// (xi - sqrt(xi^2 + eta^2)) / 2
double teleported_energy_closed(double xi, double eta);

/// sum_mu <phi_mu|h_b|phi_mu> with phi_mu = U(mu) P(mu)|g>.
double teleported_energy_direct(const StateVector& g, const PauliString& s_a,
                                const PauliString& s_b, double theta,
                                const OperatorSum& h_b);

/// Full pipeline from parameters.
QetResult run_protocol(const ModelParams& p);
/// Same, reusing a ground state already solved for build_hamiltonian(p).
QetResult run_protocol(const ModelParams& p, const GroundResult& ground);

}  // namespace kqet
