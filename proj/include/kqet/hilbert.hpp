#pragma once

// Pauli-string operator algebra on spin-1/2 chains.
//
// Basis convention: bit value 0 at a site is the Z = +1 (spin up) state, and
// site 1 is the most significant bit of the basis index. All site indices
// are 1-based.

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace kqet {

using cplx = std::complex<double>;

/// Largest chain the dense and state-vector paths are sized for.
inline constexpr int kMaxDenseSites = 12;

enum class Axis : std::uint8_t { X, Y, Z };

char axis_char(Axis a) noexcept;
Axis parse_axis(std::string_view s);

struct SiteAxis {
  int site;
  Axis axis;
  friend auto operator<=>(const SiteAxis&, const SiteAxis&) = default;
};

/// Real weight times a tensor product of single-site Pauli matrices.
/// The empty product is the identity.
class PauliString {
 public:
  PauliString() = default;
  PauliString(double coeff, std::vector<SiteAxis> factors);
  PauliString(double coeff, std::initializer_list<SiteAxis> factors)
      : PauliString(coeff, std::vector<SiteAxis>(factors)) {}

  static PauliString identity(double coeff = 1.0) { return {coeff, {}}; }
  static PauliString single(Axis axis, int site, double coeff = 1.0) {
    return {coeff, {{site, axis}}};
  }

  double coeff() const noexcept { return coeff_; }
  /// Sorted by site, one entry per site.
  const std::vector<SiteAxis>& factors() const noexcept { return factors_; }
  bool is_identity() const noexcept { return factors_.empty(); }
  bool touches(int site) const noexcept;
  int max_site() const noexcept;
  std::vector<int> support() const;

  PauliString with_coeff(double c) const { return {c, factors_}; }
  std::string to_string() const;

  /// Bit masks of this string on an n-site register.
  struct Masks {
    std::uint64_t x;  // X or Y
    std::uint64_t z;  // Z or Y
    int num_y;
  };
  Masks masks(int num_sites) const;

  friend bool operator==(const PauliString&, const PauliString&) = default;

 private:
  double coeff_ = 1.0;
  std::vector<SiteAxis> factors_;
};

/// Hermitian operator: sum of real-weighted Pauli strings plus a constant.
/// Terms are kept in canonical order and never share a factor assignment.
class OperatorSum {
 public:
  OperatorSum() = default;
  explicit OperatorSum(double offset) : offset_(offset) {}
  OperatorSum(std::vector<PauliString> terms, double offset = 0.0);

  const std::vector<PauliString>& terms() const noexcept { return terms_; }
  double offset() const noexcept { return offset_; }
  bool empty() const noexcept { return terms_.empty(); }
  int max_site() const noexcept;
  std::vector<int> support() const;

  /// Merges with an existing term of the same assignment; zero sums vanish.
  /// Identity strings are folded into the offset.
  void add(const PauliString& p);
  void add_offset(double c) noexcept { offset_ += c; }

  OperatorSum with_offset(double c) const;
  /// Drops terms with |coeff| <= tol and zeroes an offset with |offset| <= tol.
  OperatorSum pruned(double tol) const;
  bool is_real_matrix() const noexcept;

  OperatorSum& operator+=(const OperatorSum& o);
  OperatorSum& operator-=(const OperatorSum& o);
  OperatorSum& operator*=(double s);
  friend OperatorSum operator+(OperatorSum a, const OperatorSum& b) { return a += b; }
  friend OperatorSum operator-(OperatorSum a, const OperatorSum& b) { return a -= b; }
  friend OperatorSum operator*(double s, OperatorSum a) { return a *= s; }
  friend bool operator==(const OperatorSum&, const OperatorSum&) = default;

  std::string to_string() const;

 private:
  std::vector<PauliString> terms_;
  double offset_ = 0.0;
};

/// Unnormalized amplitude vector of length 2^n.
class RawState {
 public:
  RawState() = default;
  RawState(int num_sites, std::vector<cplx> amplitudes);
  static RawState zeros(int num_sites);

  int num_sites() const noexcept { return num_sites_; }
  std::size_t dim() const noexcept { return amps_.size(); }
  std::span<const cplx> amplitudes() const noexcept { return amps_; }
  std::span<cplx> amplitudes() noexcept { return amps_; }
  const cplx& operator[](std::size_t i) const { return amps_[i]; }
  cplx& operator[](std::size_t i) { return amps_[i]; }
  double norm() const;

  RawState& operator+=(const RawState& o);
  RawState& operator-=(const RawState& o);
  RawState& operator*=(cplx s);
  friend RawState operator+(RawState a, const RawState& b) { return a += b; }
  friend RawState operator-(RawState a, const RawState& b) { return a -= b; }
  friend RawState operator*(cplx s, RawState a) { return a *= s; }

 private:
  int num_sites_ = 0;
  std::vector<cplx> amps_;
};

/// Unit-norm state (norm within 1e-12 of one).
class StateVector {
 public:
  static constexpr double kNormTolerance = 1e-12;

  /// Throws StructuralError unless the amplitudes already have unit norm.
  explicit StateVector(RawState raw);
  /// Rescales to unit norm; throws on a zero vector.
  static StateVector normalized(RawState raw);
  /// Computational basis state; `bits` uses the site-1-is-MSB convention.
  static StateVector basis(int num_sites, std::uint64_t bits);

  int num_sites() const noexcept { return raw_.num_sites(); }
  std::size_t dim() const noexcept { return raw_.dim(); }
  std::span<const cplx> amplitudes() const noexcept { return raw_.amplitudes(); }
  const cplx& operator[](std::size_t i) const { return raw_[i]; }
  const RawState& raw() const noexcept { return raw_; }
  operator const RawState&() const noexcept { return raw_; }

 private:
  struct Trusted {};
  StateVector(RawState raw, Trusted) : raw_(std::move(raw)) {}
  RawState raw_;
};

/// Bit position of a 1-based site on an n-site register.
inline int site_bit(int site, int num_sites) noexcept { return num_sites - site; }

RawState apply_pauli_string(const PauliString& p, const RawState& psi);
RawState apply_operator(const OperatorSum& h, const RawState& psi);

/// <a|b>
cplx inner(const RawState& a, const RawState& b);
/// <a|h|b>
cplx matrix_element(const RawState& a, const OperatorSum& h, const RawState& b);

/// <psi|h|psi>; throws NumericalError when the imaginary part reaches 1e-10.
double expectation(const OperatorSum& h, const StateVector& psi);

/// p * q = phase * result, phase in {1, -1, i, -i}.
std::pair<cplx, PauliString> multiply_strings(const PauliString& p,
                                              const PauliString& q);

/// i[h, s] as a real-coefficient operator sum.
OperatorSum i_commutator(const OperatorSum& h, const PauliString& s);

/// Dense 2^n x 2^n matrix of h on `num_sites` sites.
Eigen::MatrixXcd to_dense(const OperatorSum& h, int num_sites);
/// Dense matrix of h restricted to the listed sites (in order, first = MSB).
/// Every term of h must act only on those sites.
Eigen::MatrixXcd to_dense_on(const OperatorSum& h, std::span<const int> sites);

}  // namespace kqet
