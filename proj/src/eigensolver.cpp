#include "kqet/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "kqet/error.hpp"
#include "kqet/simd/kernels.hpp"

namespace kqet {

int register_size(const OperatorSum& h, int min_sites) {
  return std::max(h.max_site(), min_sites);
}

StateVector fix_phase(const RawState& v) {
  RawState r = v;
  for (std::size_t i = 0; i < r.dim(); ++i) {
    const double mag = std::abs(r[i]);
    if (mag > 1e-12) {
      r *= std::conj(r[i]) / mag;
      r[i] = mag;
      break;
    }
  }
  return StateVector::normalized(std::move(r));
}

namespace {

RawState column_state(const auto& column, int num_sites) {
  std::vector<cplx> amps(column.size());
  for (Eigen::Index i = 0; i < column.size(); ++i) amps[i] = column(i);
  return RawState(num_sites, std::move(amps));
}

std::vector<Eigenpair> dense_lowest(const OperatorSum& h, int num_sites, int k) {
  const Eigen::MatrixXcd m = to_dense(h, num_sites);
  std::vector<Eigenpair> out;
  out.reserve(k);
  if (h.is_real_matrix()) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.real());
    if (es.info() != Eigen::Success) throw SolverError("dense eigensolver failed", 0);
    for (int i = 0; i < k; ++i) {
      out.push_back({es.eigenvalues()(i),
                     fix_phase(column_state(es.eigenvectors().col(i), num_sites))});
    }
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
    if (es.info() != Eigen::Success) throw SolverError("dense eigensolver failed", 0);
    for (int i = 0; i < k; ++i) {
      out.push_back({es.eigenvalues()(i),
                     fix_phase(column_state(es.eigenvectors().col(i), num_sites))});
    }
  }
  return out;
}

void project_out(RawState& w, const std::vector<RawState>& basis) {
  for (const auto& v : basis) {
    const cplx c = inner(v, w);
    simd::kernels().axpy(-c, v.amplitudes(), w.amplitudes());
  }
}

// Lowest eigenpair of h on the orthogonal complement of `locked`, by Lanczos
// with full reorthogonalization.
Eigenpair lanczos_lowest(const OperatorSum& h, int num_sites,
                         const std::vector<RawState>& locked, const EigenOptions& opts) {
  const std::size_t dim = std::size_t{1} << num_sites;
  const std::size_t krylov_cap =
      std::min<std::size_t>(opts.max_iterations, dim - locked.size());

  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL + locked.size());
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  RawState v = RawState::zeros(num_sites);
  for (std::size_t i = 0; i < dim; ++i) v[i] = cplx(uni(rng), uni(rng));
  project_out(v, locked);
  v *= 1.0 / v.norm();

  std::vector<RawState> basis;
  std::vector<double> alpha, beta;
  basis.push_back(v);

  auto ritz = [&](std::size_t m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
    Eigen::VectorXd diag(m), sub(m > 0 ? m - 1 : 0);
    for (std::size_t i = 0; i < m; ++i) diag(i) = alpha[i];
    for (std::size_t i = 0; i + 1 < m; ++i) sub(i) = beta[i];
    tri.computeFromTridiagonal(diag, sub);
    return tri;
  };
  auto assemble = [&](const Eigen::VectorXd& coeffs) {
    RawState x = RawState::zeros(num_sites);
    for (Eigen::Index i = 0; i < coeffs.size(); ++i) {
      simd::kernels().axpy(coeffs(i), basis[i].amplitudes(), x.amplitudes());
    }
    project_out(x, locked);
    const StateVector s = fix_phase(x);
    const double e = expectation(h, s);
    return Eigenpair{e, s};
  };

  for (std::size_t j = 0; j < krylov_cap; ++j) {
    RawState w = apply_operator(h, basis[j]);
    project_out(w, locked);
    alpha.push_back(inner(basis[j], w).real());
    // Two passes of Gram-Schmidt against the whole Krylov basis.
    project_out(w, basis);
    project_out(w, basis);
    project_out(w, locked);
    const double b = w.norm();
    const std::size_t m = j + 1;
    const auto tri = ritz(m);
    const double residual = b * std::abs(tri.eigenvectors()(m - 1, 0));
    const double theta = tri.eigenvalues()(0);
    const bool converged =
        residual <= opts.residual_tolerance * std::max(1.0, std::abs(theta)) || b < 1e-14;
    // A Krylov space spanning the whole complement is exact.
    const bool exhausted = m == dim - locked.size();
    if (converged || exhausted) return assemble(tri.eigenvectors().col(0));
    beta.push_back(b);
    w *= 1.0 / b;
    basis.push_back(std::move(w));
  }
  throw SolverError("Lanczos did not converge", static_cast<int>(krylov_cap));
}

std::vector<Eigenpair> lanczos_lowest_k(const OperatorSum& h, int num_sites, int k,
                                        const EigenOptions& opts) {
  std::vector<Eigenpair> out;
  std::vector<RawState> locked;
  for (int i = 0; i < k; ++i) {
    Eigenpair p = lanczos_lowest(h, num_sites, locked, opts);
    locked.push_back(p.state.raw());
    out.push_back(std::move(p));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Eigenpair& a, const Eigenpair& b) { return a.energy < b.energy; });
  return out;
}

}  // namespace

std::vector<Eigenpair> lowest_eigenpairs(const OperatorSum& h, int num_sites, int k,
                                         const EigenOptions& opts) {
  if (num_sites < h.max_site()) {
    throw StructuralError("operator acts on site " + std::to_string(h.max_site()) +
                          " beyond the register of " + std::to_string(num_sites));
  }
  if (num_sites < 1 || num_sites > 30) {
    throw StructuralError("unsupported register size " + std::to_string(num_sites));
  }
  const std::size_t dim = std::size_t{1} << num_sites;
  if (k < 1 || static_cast<std::size_t>(k) > dim) {
    throw StructuralError("requested " + std::to_string(k) + " eigenpairs of a " +
                          std::to_string(dim) + "-dimensional space");
  }
  EigenMethod method = opts.method;
  if (method == EigenMethod::kAuto) {
    method = num_sites <= kMaxDenseSites ? EigenMethod::kDense : EigenMethod::kLanczos;
  }
  if (method == EigenMethod::kDense) return dense_lowest(h, num_sites, k);
  return lanczos_lowest_k(h, num_sites, k, opts);
}

GroundResult ground_state(const OperatorSum& h, int num_sites, const EigenOptions& opts) {
  auto pairs = lowest_eigenpairs(h, num_sites, 2, opts);
  const double gap = std::max(0.0, pairs[1].energy - pairs[0].energy);
  return {pairs[0].energy, std::move(pairs[0].state), gap,
          gap < GroundResult::kDegeneracyTolerance};
}

}  // namespace kqet
