#include "kqet/hilbert.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <optional>
#include <sstream>

#include "kqet/error.hpp"
#include "kqet/simd/kernels.hpp"

namespace kqet {

char axis_char(Axis a) noexcept {
  switch (a) {
    case Axis::X:
      return 'X';
    case Axis::Y:
      return 'Y';
    case Axis::Z:
      return 'Z';
  }
  return '?';
}

Axis parse_axis(std::string_view s) {
  if (s == "X" || s == "x") return Axis::X;
  if (s == "Y" || s == "y") return Axis::Y;
  if (s == "Z" || s == "z") return Axis::Z;
  throw StructuralError("unknown Pauli axis '" + std::string(s) + "'");
}

// ---------------------------------------------------------------------------
// PauliString

PauliString::PauliString(double coeff, std::vector<SiteAxis> factors)
    : coeff_(coeff), factors_(std::move(factors)) {
  if (!std::isfinite(coeff_)) {
    throw StructuralError("Pauli string coefficient must be finite");
  }
  std::sort(factors_.begin(), factors_.end());
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (factors_[i].site < 1) {
      throw StructuralError("site index " + std::to_string(factors_[i].site) +
                            " below 1");
    }
    if (i > 0 && factors_[i].site == factors_[i - 1].site) {
      throw StructuralError("site " + std::to_string(factors_[i].site) +
                            " carries more than one Pauli factor");
    }
  }
}

bool PauliString::touches(int site) const noexcept {
  return std::any_of(factors_.begin(), factors_.end(),
                     [site](const SiteAxis& f) { return f.site == site; });
}

int PauliString::max_site() const noexcept {
  return factors_.empty() ? 0 : factors_.back().site;
}

std::vector<int> PauliString::support() const {
  std::vector<int> s;
  s.reserve(factors_.size());
  for (const auto& f : factors_) s.push_back(f.site);
  return s;
}

std::string PauliString::to_string() const {
  std::ostringstream os;
  os << coeff_;
  if (factors_.empty()) os << "*I";
  for (const auto& f : factors_) os << '*' << axis_char(f.axis) << f.site;
  return os.str();
}

PauliString::Masks PauliString::masks(int num_sites) const {
  Masks m{0, 0, 0};
  for (const auto& f : factors_) {
    if (f.site > num_sites) {
      throw StructuralError("site " + std::to_string(f.site) +
                            " outside a register of " +
                            std::to_string(num_sites) + " sites");
    }
    const std::uint64_t bit = std::uint64_t{1} << site_bit(f.site, num_sites);
    if (f.axis != Axis::Z) m.x |= bit;
    if (f.axis != Axis::X) m.z |= bit;
    if (f.axis == Axis::Y) ++m.num_y;
  }
  return m;
}

namespace {

// i^k for k mod 4.
cplx i_power(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0:
      return {1.0, 0.0};
    case 1:
      return {0.0, 1.0};
    case 2:
      return {-1.0, 0.0};
    default:
      return {0.0, -1.0};
  }
}

// Single-site product a*b = i^k * c, with c empty for the identity.
struct SiteProduct {
  int k;
  std::optional<Axis> axis;
};

SiteProduct site_product(Axis a, Axis b) {
  if (a == b) return {0, std::nullopt};
  const int ia = static_cast<int>(a), ib = static_cast<int>(b);
  const Axis c = static_cast<Axis>(3 - ia - ib);
  // Cyclic order X -> Y -> Z gives +i.
  const bool cyclic = (ib - ia + 3) % 3 == 1;
  return {cyclic ? 1 : 3, c};
}

}  // namespace

std::pair<cplx, PauliString> multiply_strings(const PauliString& p,
                                              const PauliString& q) {
  const auto& fp = p.factors();
  const auto& fq = q.factors();
  std::vector<SiteAxis> out;
  out.reserve(fp.size() + fq.size());
  int k = 0;
  std::size_t i = 0, j = 0;
  while (i < fp.size() || j < fq.size()) {
    if (j == fq.size() || (i < fp.size() && fp[i].site < fq[j].site)) {
      out.push_back(fp[i++]);
    } else if (i == fp.size() || fq[j].site < fp[i].site) {
      out.push_back(fq[j++]);
    } else {
      const SiteProduct sp = site_product(fp[i].axis, fq[j].axis);
      k += sp.k;
      if (sp.axis) out.push_back({fp[i].site, *sp.axis});
      ++i;
      ++j;
    }
  }
  return {i_power(k), PauliString(p.coeff() * q.coeff(), std::move(out))};
}

// ---------------------------------------------------------------------------
// OperatorSum

OperatorSum::OperatorSum(std::vector<PauliString> terms, double offset)
    : offset_(offset) {
  for (const auto& t : terms) add(t);
}

void OperatorSum::add(const PauliString& p) {
  if (p.is_identity()) {
    offset_ += p.coeff();
    return;
  }
  auto it = std::lower_bound(
      terms_.begin(), terms_.end(), p, [](const PauliString& a, const PauliString& b) {
        return a.factors() < b.factors();
      });
  if (it != terms_.end() && it->factors() == p.factors()) {
    const double c = it->coeff() + p.coeff();
    if (c == 0.0) {
      terms_.erase(it);
    } else {
      *it = it->with_coeff(c);
    }
    return;
  }
  if (p.coeff() != 0.0) terms_.insert(it, p);
}

int OperatorSum::max_site() const noexcept {
  int m = 0;
  for (const auto& t : terms_) m = std::max(m, t.max_site());
  return m;
}

std::vector<int> OperatorSum::support() const {
  std::vector<int> s;
  for (const auto& t : terms_) {
    for (const auto& f : t.factors()) s.push_back(f.site);
  }
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

OperatorSum OperatorSum::with_offset(double c) const {
  OperatorSum r = *this;
  r.offset_ = c;
  return r;
}

OperatorSum OperatorSum::pruned(double tol) const {
  OperatorSum r;
  for (const auto& t : terms_) {
    if (std::abs(t.coeff()) > tol) r.terms_.push_back(t);
  }
  r.offset_ = std::abs(offset_) > tol ? offset_ : 0.0;
  return r;
}

bool OperatorSum::is_real_matrix() const noexcept {
  // Y carries an i; strings with an even Y count have real matrices.
  return std::all_of(terms_.begin(), terms_.end(), [](const PauliString& t) {
    return std::count_if(t.factors().begin(), t.factors().end(),
                         [](const SiteAxis& f) { return f.axis == Axis::Y; }) %
               2 ==
           0;
  });
}

OperatorSum& OperatorSum::operator+=(const OperatorSum& o) {
  for (const auto& t : o.terms_) add(t);
  offset_ += o.offset_;
  return *this;
}

OperatorSum& OperatorSum::operator-=(const OperatorSum& o) {
  for (const auto& t : o.terms_) add(t.with_coeff(-t.coeff()));
  offset_ -= o.offset_;
  return *this;
}

OperatorSum& OperatorSum::operator*=(double s) {
  if (s == 0.0) {
    terms_.clear();
    offset_ = 0.0;
    return *this;
  }
  for (auto& t : terms_) t = t.with_coeff(t.coeff() * s);
  offset_ *= s;
  return *this;
}

std::string OperatorSum::to_string() const {
  std::ostringstream os;
  for (const auto& t : terms_) os << t.to_string() << " + ";
  os << offset_;
  return os.str();
}

// ---------------------------------------------------------------------------
// States

RawState::RawState(int num_sites, std::vector<cplx> amplitudes)
    : num_sites_(num_sites), amps_(std::move(amplitudes)) {
  if (num_sites_ < 0 || num_sites_ > 62 ||
      amps_.size() != (std::size_t{1} << num_sites_)) {
    throw StructuralError("state of " + std::to_string(amps_.size()) +
                          " amplitudes does not match " +
                          std::to_string(num_sites_) + " sites");
  }
}

RawState RawState::zeros(int num_sites) {
  if (num_sites < 0 || num_sites > 30) {
    throw StructuralError("unsupported register size " + std::to_string(num_sites));
  }
  return RawState(num_sites, std::vector<cplx>(std::size_t{1} << num_sites));
}

double RawState::norm() const {
  return std::sqrt(simd::kernels().norm_squared(amps_));
}

RawState& RawState::operator+=(const RawState& o) {
  if (o.dim() != dim()) throw StructuralError("state dimension mismatch");
  simd::kernels().axpy(1.0, o.amps_, amps_);
  return *this;
}

RawState& RawState::operator-=(const RawState& o) {
  if (o.dim() != dim()) throw StructuralError("state dimension mismatch");
  simd::kernels().axpy(-1.0, o.amps_, amps_);
  return *this;
}

RawState& RawState::operator*=(cplx s) {
  for (auto& a : amps_) a *= s;
  return *this;
}

StateVector::StateVector(RawState raw) : raw_(std::move(raw)) {
  const double n = raw_.norm();
  if (std::abs(n - 1.0) > kNormTolerance) {
    throw StructuralError("state norm " + std::to_string(n) + " is not 1");
  }
}

StateVector StateVector::normalized(RawState raw) {
  const double n = raw.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw StructuralError("cannot normalize a zero or non-finite state");
  }
  raw *= 1.0 / n;
  return StateVector(std::move(raw), Trusted{});
}

StateVector StateVector::basis(int num_sites, std::uint64_t bits) {
  RawState r = RawState::zeros(num_sites);
  if (bits >= r.dim()) throw StructuralError("basis index out of range");
  r[bits] = 1.0;
  return StateVector(std::move(r), Trusted{});
}

// ---------------------------------------------------------------------------
// Action on states

namespace {

void accumulate(const PauliString& p, const RawState& psi, RawState& out) {
  const auto m = p.masks(psi.num_sites());
  const cplx c = p.coeff() * i_power(m.num_y);
  simd::kernels().pauli_accumulate(out.amplitudes(), psi.amplitudes(), m.x, m.z, c);
}

}  // namespace

RawState apply_pauli_string(const PauliString& p, const RawState& psi) {
  RawState out = RawState::zeros(psi.num_sites());
  accumulate(p, psi, out);
  return out;
}

RawState apply_operator(const OperatorSum& h, const RawState& psi) {
  RawState out = RawState::zeros(psi.num_sites());
  for (const auto& t : h.terms()) accumulate(t, psi, out);
  if (h.offset() != 0.0) {
    simd::kernels().axpy(h.offset(), psi.amplitudes(), out.amplitudes());
  }
  return out;
}

cplx inner(const RawState& a, const RawState& b) {
  if (a.dim() != b.dim()) throw StructuralError("state dimension mismatch");
  return simd::kernels().inner_product(a.amplitudes(), b.amplitudes());
}

cplx matrix_element(const RawState& a, const OperatorSum& h, const RawState& b) {
  return inner(a, apply_operator(h, b));
}

double expectation(const OperatorSum& h, const StateVector& psi) {
  const cplx v = matrix_element(psi, h, psi);
  if (std::abs(v.imag()) >= 1e-10) {
    throw NumericalError("expectation value has imaginary part " +
                         std::to_string(v.imag()));
  }
  return v.real();
}

OperatorSum i_commutator(const OperatorSum& h, const PauliString& s) {
  OperatorSum out;
  for (const auto& t : h.terms()) {
    // Pauli strings either commute or anticommute; count the sites where
    // both act with different axes.
    int clashes = 0;
    std::size_t i = 0, j = 0;
    const auto& ft = t.factors();
    const auto& fs = s.factors();
    while (i < ft.size() && j < fs.size()) {
      if (ft[i].site < fs[j].site) {
        ++i;
      } else if (fs[j].site < ft[i].site) {
        ++j;
      } else {
        clashes += ft[i].axis != fs[j].axis;
        ++i;
        ++j;
      }
    }
    if (clashes % 2 == 0) continue;
    // i[t, s] = 2i * t s for anticommuting strings.
    const auto [phase, prod] = multiply_strings(t, s);
    const cplx w = cplx{0.0, 2.0} * phase * prod.coeff();
    if (std::abs(w.imag()) >= 1e-12) {
      throw NumericalError("commutator produced an imaginary coefficient");
    }
    out.add(prod.with_coeff(w.real()));
  }
  return out;
}

Eigen::MatrixXcd to_dense(const OperatorSum& h, int num_sites) {
  if (num_sites < 0 || num_sites > kMaxDenseSites) {
    throw CapabilityError("dense materialization limited to " +
                          std::to_string(kMaxDenseSites) + " sites, got " +
                          std::to_string(num_sites));
  }
  const std::uint64_t dim = std::uint64_t{1} << num_sites;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& t : h.terms()) {
    const auto mk = t.masks(num_sites);
    const cplx c = t.coeff() * i_power(mk.num_y);
    for (std::uint64_t b = 0; b < dim; ++b) {
      const bool odd = std::popcount(b & mk.z) & 1;
      m(b ^ mk.x, b) += odd ? -c : c;
    }
  }
  m.diagonal().array() += h.offset();
  return m;
}

Eigen::MatrixXcd to_dense_on(const OperatorSum& h, std::span<const int> sites) {
  OperatorSum local(h.offset());
  for (const auto& t : h.terms()) {
    std::vector<SiteAxis> f;
    for (const auto& sa : t.factors()) {
      auto it = std::find(sites.begin(), sites.end(), sa.site);
      if (it == sites.end()) {
        throw StructuralError("term " + t.to_string() +
                              " acts outside the requested support");
      }
      f.push_back({static_cast<int>(it - sites.begin()) + 1, sa.axis});
    }
    local.add(PauliString(t.coeff(), std::move(f)));
  }
  return to_dense(local, static_cast<int>(sites.size()));
}

}  // namespace kqet
