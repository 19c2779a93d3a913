#pragma once

// JSON run configuration.
//
// Top-level keys (all optional):
//   N, J, Delta, Jk, B, coupled_site, n_A, n_B,
//   sigma_A, sigma_B ("X" | "Y" | "Z"), include_impurity_bulk_bond (bool),
//   cut (int, 0 = N/2),
//   sweep:   { axis1: {name, lo, hi, steps}, axis2: {...} | null,
//              outputs: [column...], emit: ["csv", "svg"], workers: int }
//   minimal: { lo, hi, steps }
//   output:  { out: path, svg_prefix: path }
// Unknown keys are rejected at every level.

#include <filesystem>
#include <set>
#include <string>

#include "kqet/model.hpp"
#include "kqet/sweep.hpp"

namespace kqet {

/// Log-spaced (h, k) grid for the two-qubit bound check.
struct MinimalGrid {
  double lo = 0.1;
  double hi = 10.0;
  int steps = 10;

  double value(int i) const noexcept;
  friend bool operator==(const MinimalGrid&, const MinimalGrid&) = default;
};

struct RunConfig {
  ModelParams model;
  SweepConfig sweep = default_sweep_config();
  int cut = 0;
  MinimalGrid minimal;
  std::string out_path;
  std::string svg_prefix;
  /// Top-level model keys given explicitly, e.g. "N" or "n_B".
  std::set<std::string> present;

  bool operator==(const RunConfig& o) const {
    return model == o.model && sweep == o.sweep && cut == o.cut && minimal == o.minimal &&
           out_path == o.out_path && svg_prefix == o.svg_prefix;
  }
};

/// Throws ConfigError with line/column on malformed JSON and names the
/// offending key on validation failure.
RunConfig parse_config(const std::string& text, const std::string& origin = "<string>");
RunConfig load_config(const std::filesystem::path& path);
std::string serialize_config(const RunConfig& c);

}  // namespace kqet
