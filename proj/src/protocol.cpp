#include "kqet/protocol.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "kqet/error.hpp"
#include "kqet/simd/kernels.hpp"

namespace kqet {

namespace {

void require_unit_single_site(const PauliString& s, const char* who) {
  if (s.factors().size() != 1 || s.coeff() != 1.0) {
    throw StructuralError(std::string(who) + " must be a unit single-site Pauli, got " +
                          s.to_string());
  }
}

}  // namespace

std::pair<double, double> measurement_probabilities(const StateVector& g,
                                                    const PauliString& s_a) {
  require_unit_single_site(s_a, "Alice's observable");
  const double m = expectation(OperatorSum({s_a}), g);
  const double p_plus = 0.5 * (1.0 + m);
  return {p_plus, 1.0 - p_plus};
}

RawState project_outcome(const RawState& psi, const PauliString& s_a, int mu) {
  if (mu != 1 && mu != -1) throw StructuralError("outcome must be +1 or -1");
  RawState out = apply_pauli_string(s_a, psi);
  out *= static_cast<double>(mu);
  out += psi;
  out *= 0.5;
  return out;
}

StateVector post_measurement_state(const StateVector& g, const PauliString& s_a, int mu) {
  const auto [p_plus, p_minus] = measurement_probabilities(g, s_a);
  const double p = mu == 1 ? p_plus : p_minus;
  if (p < kMinOutcomeProbability) {
    throw ImpossibleOutcomeError("outcome " + std::to_string(mu) + " has probability " +
                                 std::to_string(p));
  }
  return StateVector::normalized(project_outcome(g, s_a, mu));
}

double injected_energy(const StateVector& g, const OperatorSum& h_shifted,
                       const PauliString& s_a) {
  require_unit_single_site(s_a, "Alice's observable");
  double e = 0.0;
  for (int mu : {1, -1}) {
    const RawState branch = project_outcome(g, s_a, mu);
    e += matrix_element(branch, h_shifted, branch).real();
  }
  return e;
}

double xi(const StateVector& g, const OperatorSum& h_shifted, const PauliString& s_b) {
  require_unit_single_site(s_b, "Bob's generator");
  const RawState flipped = apply_pauli_string(s_b, g);
  return matrix_element(flipped, h_shifted, flipped).real();
}

double eta(const StateVector& g, const OperatorSum& h, const PauliString& s_a,
           const PauliString& s_b) {
  require_unit_single_site(s_a, "Alice's observable");
  require_unit_single_site(s_b, "Bob's generator");
  if (s_a.factors()[0].site == s_b.factors()[0].site) {
    throw StructuralError("Alice and Bob must act on distinct sites");
  }
  // i[s_B, h] = -i[h, s_B]
  const OperatorSum rate = -1.0 * i_commutator(h, s_b);
  const cplx v = inner(apply_pauli_string(s_a, g), apply_operator(rate, g));
  if (std::abs(v.imag()) >= 1e-10) {
    throw NumericalError("eta has imaginary part " + std::to_string(v.imag()));
  }
  return v.real();
}

double optimal_theta(double xi, double eta) {
  if (xi == 0.0 && eta == 0.0) {
    throw DomainError("rotation angle undefined for xi = eta = 0");
  }
  // Adding +0.0 turns -0.0 into +0.0 so eta = 0, xi < 0 lands on +pi/2.
  const double theta = 0.5 * std::atan2(-eta + 0.0, xi);
  return theta <= -std::numbers::pi / 2 ? theta + std::numbers::pi : theta;
}

ConditionalUnitary::ConditionalUnitary(int mu, double theta, PauliString s_b)
    : identity_weight_(std::cos(theta)),
      pauli_weight_(mu * std::sin(theta)),
      s_b_(std::move(s_b)) {
  if (mu != 1 && mu != -1) throw StructuralError("outcome must be +1 or -1");
  require_unit_single_site(s_b_, "Bob's generator");
}

RawState ConditionalUnitary::apply(const RawState& psi) const {
  RawState out = apply_pauli_string(s_b_, psi);
  out *= cplx(0.0, -pauli_weight_);
  simd::kernels().axpy(identity_weight_, psi.amplitudes(), out.amplitudes());
  return out;
}

RawState ConditionalUnitary::apply_adjoint(const RawState& psi) const {
  RawState out = apply_pauli_string(s_b_, psi);
  out *= cplx(0.0, pauli_weight_);
  simd::kernels().axpy(identity_weight_, psi.amplitudes(), out.amplitudes());
  return out;
}

ConditionalUnitary conditional_unitary(int mu, double theta, const PauliString& s_b) {
  return {mu, theta, s_b};
}

double teleported_energy_closed(double xi, double eta) {
  return 0.5 * (xi - std::hypot(xi, eta));
}

double teleported_energy_direct(const StateVector& g, const PauliString& s_a,
                                const PauliString& s_b, double theta,
                                const OperatorSum& h_b) {
  double e = 0.0;
  for (int mu : {1, -1}) {
    const RawState branch = conditional_unitary(mu, theta, s_b).apply(project_outcome(g, s_a, mu));
    e += matrix_element(branch, h_b, branch).real();
  }
  return e;
}

QetResult run_protocol(const ModelParams& p) {
  validate_protocol(p);
  const OperatorSum h = build_hamiltonian(p);
  return run_protocol(p, ground_state(h, p.num_sites));
}

QetResult run_protocol(const ModelParams& p, const GroundResult& ground) {
  validate_protocol(p);
  const OperatorSum h = build_hamiltonian(p);
  const OperatorSum h_shifted = shift_ground(h, ground.e0);
  const StateVector& g = ground.state;
  const PauliString s_a = PauliString::single(p.sigma_a, p.n_a);
  const PauliString s_b = PauliString::single(p.sigma_b, p.n_b);
  const LocalBlock bob = incident_block(h, p.n_b, g);

  QetResult r{};
  r.xi = xi(g, h_shifted, s_b);
  r.eta = eta(g, h, s_a, s_b);
  r.theta = optimal_theta(r.xi, r.eta);
  r.p_plus = measurement_probabilities(g, s_a).first;
  r.e_injected = injected_energy(g, h_shifted, s_a);
  r.e_b_closed = teleported_energy_closed(r.xi, r.eta);
  r.e_b_direct = teleported_energy_direct(g, s_a, s_b, r.theta, bob.op);
  r.e_teleported = 0.0 - r.e_b_closed;  // no negative zero
  r.degenerate = ground.degenerate;
  return r;
}

}  // namespace kqet
