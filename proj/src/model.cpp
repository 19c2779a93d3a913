#include "kqet/model.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "kqet/entanglement.hpp"
#include "kqet/error.hpp"

namespace kqet {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw StructuralError(what);
}

void add_bond(OperatorSum& h, double coupling, double delta, int a, int b) {
  if (coupling == 0.0) return;
  const double w = coupling / 4.0;
  h.add(PauliString(w, {{a, Axis::X}, {b, Axis::X}}));
  h.add(PauliString(w, {{a, Axis::Y}, {b, Axis::Y}}));
  if (delta != 0.0) h.add(PauliString(w * delta, {{a, Axis::Z}, {b, Axis::Z}}));
}

// Bonds are pairs (lower, upper) with the coupling and anisotropy they carry.
struct Bond {
  int lo, hi;
  double coupling;
};

std::vector<Bond> bonds_of(const ModelParams& p) {
  std::vector<Bond> bonds;
  const int first_host = p.host_fixture() ? 1 : 2;
  if (!p.host_fixture() && p.include_impurity_bulk_bond) bonds.push_back({1, 2, p.j});
  for (int i = first_host; i < p.num_sites; ++i) bonds.push_back({i, i + 1, p.j});
  if (!p.host_fixture()) {
    bonds.push_back({ModelParams::kImpuritySite, p.coupled_site, p.jk});
  }
  return bonds;
}

}  // namespace

void validate_hamiltonian(const ModelParams& p) {
  require(p.num_sites >= 2 && p.num_sites <= kMaxDenseSites,
          "N=" + std::to_string(p.num_sites) + " outside [2, " +
              std::to_string(kMaxDenseSites) + "]");
  require(std::isfinite(p.j), "J must be finite");
  require(std::isfinite(p.delta), "Delta must be finite");
  require(std::isfinite(p.jk), "Jk must be finite");
  require(std::isfinite(p.b), "B must be finite");
  if (p.host_fixture()) {
    require(p.jk == 0.0, "Jk must be 0 for an impurity-free chain of N=" +
                             std::to_string(p.num_sites) + " < 4 sites");
  } else {
    require(p.coupled_site >= 2 && p.coupled_site <= p.num_sites,
            "coupled_site=" + std::to_string(p.coupled_site) + " outside [2, N=" +
                std::to_string(p.num_sites) + "]");
  }
}

void validate_protocol(const ModelParams& p) {
  validate_hamiltonian(p);
  require(p.num_sites >= ModelParams::kMinProtocolSites,
          "N=" + std::to_string(p.num_sites) + " below 4 has no room for the protocol");
  const std::string range = " outside [2, N=" + std::to_string(p.num_sites) + "]";
  require(p.n_a >= 2 && p.n_a <= p.num_sites, "n_A=" + std::to_string(p.n_a) + range);
  require(p.n_b >= 2 && p.n_b <= p.num_sites, "n_B=" + std::to_string(p.n_b) + range);
  require(std::abs(p.n_a - p.n_b) >= 2,
          "n_A and n_B must be at least two sites apart (n_A=" + std::to_string(p.n_a) +
              ", n_B=" + std::to_string(p.n_b) + ")");
}

OperatorSum build_hamiltonian(const ModelParams& p) {
  validate_hamiltonian(p);
  OperatorSum h;
  for (const Bond& bond : bonds_of(p)) add_bond(h, bond.coupling, p.delta, bond.lo, bond.hi);
  if (p.b != 0.0) {
    for (int i = 1; i <= p.num_sites; ++i) h.add(PauliString::single(Axis::Z, i, p.b / 2.0));
  }
  return h;
}

OperatorSum shift_ground(const OperatorSum& h, double e0) {
  OperatorSum r = h;
  r.add_offset(-e0);
  return r;
}

LocalBlock incident_block(const OperatorSum& h, int site, const StateVector& g) {
  OperatorSum op;
  for (const auto& t : h.terms()) {
    if (t.touches(site)) op.add(t);
  }
  if (op.empty()) {
    throw DegenerateModelError("no Hamiltonian term acts on site " + std::to_string(site));
  }
  op.add_offset(-expectation(op, g));
  return {site, std::move(op)};
}

LocalBlock bob_local_hamiltonian(const ModelParams& p, const StateVector& g) {
  validate_protocol(p);
  return incident_block(build_hamiltonian(p), p.n_b, g);
}

std::vector<LocalBlock> zero_point_partition(const ModelParams& p, const StateVector& g) {
  validate_hamiltonian(p);
  std::vector<LocalBlock> blocks;
  blocks.reserve(p.num_sites);
  for (int n = 1; n <= p.num_sites; ++n) blocks.push_back({n, OperatorSum{}});
  for (const Bond& bond : bonds_of(p)) {
    add_bond(blocks[bond.lo - 1].op, bond.coupling, p.delta, bond.lo, bond.hi);
  }
  if (p.b != 0.0) {
    for (int i = 1; i <= p.num_sites; ++i) {
      blocks[i - 1].op.add(PauliString::single(Axis::Z, i, p.b / 2.0));
    }
  }
  for (auto& blk : blocks) blk.op.add_offset(-expectation(blk.op, g));
  return blocks;
}

double check_commutator_condition(const OperatorSum& h, const OperatorSum& block,
                                  const PauliString& s) {
  const OperatorSum diff = i_commutator(h, s) - i_commutator(block, s);
  return operator_norm(diff);
}

}  // namespace kqet
