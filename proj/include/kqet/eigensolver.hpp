#pragma once

#include <vector>

#include "kqet/hilbert.hpp"

namespace kqet {

struct Eigenpair {
  double energy;
  StateVector state;
};

enum class EigenMethod {
  kAuto,     // dense up to kMaxDenseSites, Lanczos beyond
  kDense,
  kLanczos,
};

struct EigenOptions {
  EigenMethod method = EigenMethod::kAuto;
  int max_iterations = 500;
  double residual_tolerance = 1e-11;
};

/// Register size of h: its largest site index, at least `min_sites`.
int register_size(const OperatorSum& h, int min_sites = 1);

/// The k lowest eigenpairs in nondecreasing energy order. Each eigenvector
/// is phase-fixed so its first nonzero amplitude is real and positive.
std::vector<Eigenpair> lowest_eigenpairs(const OperatorSum& h, int num_sites, int k,
                                         const EigenOptions& opts = {});

/// Phase convention shared by every eigensolver path.
StateVector fix_phase(const RawState& v);

struct GroundResult {
  static constexpr double kDegeneracyTolerance = 1e-10;

  double e0;
  StateVector state;
  double gap;
  bool degenerate;
};

GroundResult ground_state(const OperatorSum& h, int num_sites,
                          const EigenOptions& opts = {});

}  // namespace kqet
