#pragma once

// Reference implementations used only by tests. Nothing here calls into the
// library's dense or eigensolver code.

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "kqet/hilbert.hpp"
#include "kqet/model.hpp"

namespace oracle {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;

inline Mat pauli(kqet::Axis a) {
  Mat m(2, 2);
  switch (a) {
    case kqet::Axis::X: m << 0, 1, 1, 0; break;
    case kqet::Axis::Y: m << 0, cplx(0, -1), cplx(0, 1), 0; break;
    case kqet::Axis::Z: m << 1, 0, 0, -1; break;
  }
  return m;
}

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

// Site 1 is the leftmost Kronecker factor.
inline Mat string_matrix(const kqet::PauliString& p, int n) {
  Mat m = Mat::Identity(1, 1);
  for (int s = 1; s <= n; ++s) {
    Mat f = Mat::Identity(2, 2);
    for (const auto& sa : p.factors()) {
      if (sa.site == s) f = pauli(sa.axis);
    }
    m = kron(m, f);
  }
  return p.coeff() * m;
}

inline Mat operator_matrix(const kqet::OperatorSum& h, int n) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  Mat m = h.offset() * Mat::Identity(dim, dim);
  for (const auto& t : h.terms()) m += string_matrix(t, n);
  return m;
}

inline Eigen::VectorXcd vec(const kqet::RawState& s) {
  Eigen::VectorXcd v(s.dim());
  for (std::size_t i = 0; i < s.dim(); ++i) v(i) = s[i];
  return v;
}

inline kqet::RawState raw(const Eigen::VectorXcd& v, int n) {
  return kqet::RawState(n, std::vector<cplx>(v.data(), v.data() + v.size()));
}

// Cyclic Jacobi rotations on a real symmetric matrix.
inline std::vector<double> jacobi_symmetric(Eigen::MatrixXd a) {
  const Eigen::Index n = a.rows();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off < 1e-30) break;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) < 1e-300) continue;
        const double tau = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t), s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (Eigen::Index i = 0; i < n; ++i) ev[i] = a(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

// Hermitian A + iB through the real embedding [[A, -B], [B, A]], whose
// spectrum is that of the Hermitian matrix with every level doubled.
inline std::vector<double> hermitian_eigenvalues(const Mat& h) {
  const Eigen::Index n = h.rows();
  Eigen::MatrixXd e(2 * n, 2 * n);
  e << h.real(), -h.imag(), h.imag(), h.real();
  const std::vector<double> doubled = jacobi_symmetric(e);
  std::vector<double> out;
  for (std::size_t i = 0; i < doubled.size(); i += 2) out.push_back(doubled[i]);
  return out;
}

// Random protocol-valid parameters. With random_axes false the measurement
// axes keep their defaults (X for Alice, Y for Bob).
inline kqet::ModelParams random_params(std::mt19937_64& rng, std::vector<int> sizes = {4, 6, 8},
                                       bool random_axes = true) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  kqet::ModelParams p;
  p.num_sites = sizes[rng() % sizes.size()];
  p.j = 0.2 + 1.3 * u(rng);
  p.delta = -2.0 + 4.0 * u(rng);
  p.jk = 0.05 + 0.95 * u(rng);
  p.b = 1.5 * u(rng);
  p.coupled_site = 2 + static_cast<int>(rng() % (p.num_sites - 1));
  do {
    p.n_a = 2 + static_cast<int>(rng() % (p.num_sites - 1));
    p.n_b = 2 + static_cast<int>(rng() % (p.num_sites - 1));
  } while (std::abs(p.n_a - p.n_b) < 2);
  if (!random_axes) return p;
  const kqet::Axis axes[] = {kqet::Axis::X, kqet::Axis::Y, kqet::Axis::Z};
  p.sigma_a = axes[rng() % 3];
  p.sigma_b = axes[rng() % 3];
  return p;
}

}  // namespace oracle
