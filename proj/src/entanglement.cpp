#include "kqet/entanglement.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "kqet/eigensolver.hpp"
#include "kqet/error.hpp"
#include "kqet/model.hpp"
#include "kqet/protocol.hpp"

namespace kqet {

namespace {

constexpr double kEigenClamp = 1e-14;

}  // namespace

ReducedDensity reduced_density(const StateVector& psi, std::vector<int> subset) {
  const int n = psi.num_sites();
  if (subset.empty() || static_cast<int>(subset.size()) >= n) {
    throw StructuralError("subsystem must be a nonempty proper subset of the " +
                          std::to_string(n) + " sites");
  }
  std::vector<bool> in_subset(n + 1, false);
  for (int s : subset) {
    if (s < 1 || s > n) {
      throw StructuralError("site " + std::to_string(s) + " outside [1, " +
                            std::to_string(n) + "]");
    }
    if (in_subset[s]) throw StructuralError("site " + std::to_string(s) + " repeated");
    in_subset[s] = true;
  }
  std::vector<int> env;
  for (int s = 1; s <= n; ++s) {
    if (!in_subset[s]) env.push_back(s);
  }

  const auto gather = [n](std::uint64_t index, const std::vector<int>& sites) {
    std::uint64_t out = 0;
    for (int s : sites) out = (out << 1) | ((index >> site_bit(s, n)) & 1);
    return out;
  };

  const Eigen::Index dim_s = Eigen::Index{1} << subset.size();
  const Eigen::Index dim_e = Eigen::Index{1} << env.size();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim_s, dim_e);
  for (std::uint64_t i = 0; i < psi.dim(); ++i) {
    m(gather(i, subset), gather(i, env)) = psi[i];
  }
  return {m * m.adjoint(), std::move(subset)};
}

double entropy_from_probabilities(std::span<const double> probabilities) {
  double s = 0.0;
  for (double p : probabilities) {
    if (p > kEigenClamp) s -= p * std::log(p);
  }
  return s;
}

double von_neumann_entropy(const ReducedDensity& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.matrix, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& ev = es.eigenvalues();
  return entropy_from_probabilities(std::span<const double>(ev.data(), ev.size()));
}

SchmidtSpectrum schmidt_coefficients(const StateVector& psi, int cut) {
  const int n = psi.num_sites();
  if (cut < 1 || cut > n - 1) {
    throw StructuralError("cut " + std::to_string(cut) + " outside [1, " +
                          std::to_string(n - 1) + "]");
  }
  const Eigen::Index rows = Eigen::Index{1} << cut;
  const Eigen::Index cols = Eigen::Index{1} << (n - cut);
  // Site 1 is the most significant bit, so the left block indexes rows of
  // the row-major reshape.
  Eigen::MatrixXcd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = psi[r * cols + c];
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const Eigen::VectorXd& sv = svd.singularValues();
  std::vector<double> coeffs(sv.data(), sv.data() + sv.size());
  std::sort(coeffs.begin(), coeffs.end(), std::greater<>());
  return {std::move(coeffs), cut};
}

double schmidt_entropy(const SchmidtSpectrum& s) {
  std::vector<double> p;
  p.reserve(s.coefficients.size());
  for (double c : s.coefficients) p.push_back(c * c);
  return entropy_from_probabilities(p);
}

double cut_entropy(const StateVector& psi, int cut) {
  return schmidt_entropy(schmidt_coefficients(psi, cut));
}

double half_chain_entropy(const StateVector& psi) {
  return cut_entropy(psi, psi.num_sites() / 2);
}

double delta_s_ab(const StateVector& psi, const PauliString& s_a, int cut) {
  const double before = cut_entropy(psi, cut);
  const auto [p_plus, p_minus] = measurement_probabilities(psi, s_a);
  double after = 0.0;
  for (const auto& [mu, p] : {std::pair{1, p_plus}, std::pair{-1, p_minus}}) {
    if (p < kMinOutcomeProbability) continue;
    after += p * cut_entropy(post_measurement_state(psi, s_a, mu), cut);
  }
  return before - after;
}

int midpoint_cut(int n_a, int n_b) noexcept { return (n_a + n_b) / 2; }

double delta_s_ab(const StateVector& g, const ModelParams& p) {
  validate_protocol(p);
  return delta_s_ab(g, PauliString::single(p.sigma_a, p.n_a), midpoint_cut(p.n_a, p.n_b));
}

double magnetization(const StateVector& psi) {
  const int n = psi.num_sites();
  double total = 0.0;
  for (std::uint64_t b = 0; b < psi.dim(); ++b) {
    total += std::norm(psi[b]) * (n - 2 * std::popcount(b));
  }
  return total / n;
}

double operator_norm(const OperatorSum& h) {
  const std::vector<int> support = h.support();
  if (support.size() > static_cast<std::size_t>(kMaxDenseSites)) {
    throw CapabilityError("operator support of " + std::to_string(support.size()) +
                          " sites exceeds the dense limit of " +
                          std::to_string(kMaxDenseSites));
  }
  if (support.empty()) return std::abs(h.offset());
  const Eigen::MatrixXcd m = to_dense_on(h, support);
  if (h.is_real_matrix()) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.real(), Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

double bound_eq10_margin(double s_a_comp, double e_b, double h_b_norm) {
  if (!(h_b_norm > 0.0)) {
    throw DomainError("extraction block norm must be positive, got " +
                      std::to_string(h_b_norm));
  }
  return s_a_comp - e_b * e_b / (4.0 * h_b_norm * h_b_norm);
}

double minimal_model_bound(double h, double k, double e_b) {
  const double lambda = std::atan(k / h);
  const double c = std::cos(lambda);
  if (!(h > 0.0) || !(c > 0.0)) {
    throw DomainError("minimal model needs h > 0 (cos lambda = 0 otherwise)");
  }
  const double s = std::sin(lambda);
  // 1 - cos(lambda) = 2 sin^2(lambda/2), stable as lambda -> 0.
  const double half = std::sin(lambda / 2.0);
  const double log_ratio = std::log((1.0 + c) / (2.0 * half * half));
  return -(1.0 + s * s) / (2.0 * c * c * c) * log_ratio * e_b / std::hypot(h, k);
}

MinimalModelCase minimal_model_case(double h, double k) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw DomainError("minimal model needs h > 0 (cos lambda = 0 otherwise)");
  }
  if (k == 0.0 || !std::isfinite(k)) throw DomainError("minimal model needs k != 0");

  OperatorSum ham;
  ham.add(PauliString::single(Axis::Z, 1, h));
  ham.add(PauliString::single(Axis::Z, 2, h));
  ham.add(PauliString(2.0 * k, {{1, Axis::X}, {2, Axis::X}}));
  const GroundResult ground = ground_state(ham, 2);
  const OperatorSum shifted = shift_ground(ham, ground.e0);
  const StateVector& g = ground.state;

  const PauliString s_a = PauliString::single(Axis::X, 1);
  const PauliString s_b = PauliString::single(Axis::Y, 2);
  const double x = xi(g, shifted, s_b);
  const double e = eta(g, ham, s_a, s_b);
  const double e_b = -teleported_energy_closed(x, e);

  MinimalModelCase out{};
  out.h = h;
  out.k = k;
  out.lambda = std::atan(k / h);
  out.delta_s = delta_s_ab(g, s_a, 1);
  out.e_b = e_b;
  out.rhs_eq9 = minimal_model_bound(h, k, e_b);
  return out;
}

}  // namespace kqet
